#pragma once

#include <stdexcept>
#include <string>

namespace bodyregion {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// volume_io
struct malformed_header : error { using error::error; };
struct unsupported_datatype : error { using error::error; };
struct dimension_mismatch : error { using error::error; };
struct not_a_label_map : error { using error::error; };
struct oblique_volume : error { using error::error; };
struct empty_volume : error { using error::error; };
struct io_error : error { using error::error; };

// taxonomy
struct unknown_class_name : error { using error::error; };
struct invalid_threshold : error { using error::error; };
struct missing_region_rule : error { using error::error; };

// labels
struct empty_input : error { using error::error; };
struct unknown_token : error { using error::error; };
struct mixed_other : error { using error::error; };

// mllm
struct degenerate_axis : error { using error::error; };
struct missing_evidence : error { using error::error; };
struct unparseable_response : error { using error::error; };
struct transport_error : error { using error::error; };

// phantoms
struct spec_overflow : error { using error::error; };

// metrics / cli
struct empty_dataset : error { using error::error; };
struct bad_config : error { using error::error; };
struct no_inputs : error { using error::error; };

} // namespace bodyregion
