#pragma once

// NIfTI-1 single-file reader/writer (.nii, .nii.gz). Little- and big-endian
// headers are handled on read; files are written little-endian with an sform
// affine. Gzip I/O goes through zlib, which also reads plain files
// transparently.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

#include <zlib.h>

#include "bodyregion/errors.hpp"
#include "bodyregion/volume.hpp"

namespace bodyregion {
namespace nifti {

inline constexpr int16_t dt_uint8 = 2;
inline constexpr int16_t dt_int16 = 4;
inline constexpr int16_t dt_int32 = 8;
inline constexpr int16_t dt_float32 = 16;
inline constexpr int16_t dt_float64 = 64;
inline constexpr int16_t dt_uint16 = 512;

inline int bytes_per_voxel(int16_t dt) {
    switch (dt) {
        case dt_uint8: return 1;
        case dt_int16: return 2;
        case dt_uint16: return 2;
        case dt_int32: return 4;
        case dt_float32: return 4;
        case dt_float64: return 8;
        default: throw unsupported_datatype("NIfTI datatype " + std::to_string(dt));
    }
}

inline bool label_datatype(int16_t dt) {
    return dt == dt_uint8 || dt == dt_int16 || dt == dt_uint16 || dt == dt_int32;
}

inline bool intensity_datatype(int16_t dt) {
    return dt == dt_int16 || dt == dt_float32 || dt == dt_float64;
}

namespace detail {

inline std::vector<uint8_t> read_all(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw io_error("cannot open " + path.string());
    std::vector<uint8_t> buf;
    std::array<uint8_t, 1 << 20> chunk;
    int n;
    while ((n = gzread(f, chunk.data(), static_cast<unsigned>(chunk.size()))) > 0)
        buf.insert(buf.end(), chunk.data(), chunk.data() + n);
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw io_error("read error in " + path.string());
    return buf;
}

template <typename T>
T get(const uint8_t* p, bool swap) {
    std::array<uint8_t, sizeof(T)> b;
    std::memcpy(b.data(), p, sizeof(T));
    if (swap) std::reverse(b.begin(), b.end());
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

template <typename T>
void put(std::vector<uint8_t>& out, size_t offset, T v) {
    std::memcpy(out.data() + offset, &v, sizeof(T)); // host is little-endian
}

inline bool host_is_little_endian() {
    const uint16_t x = 1;
    uint8_t b;
    std::memcpy(&b, &x, 1);
    return b == 1;
}

template <typename T>
void decode_voxels(const uint8_t* data, size_t n, bool swap, volume& v, double slope, double inter) {
    const bool scale = slope != 0.0 && !(slope == 1.0 && inter == 0.0);
    if (v.kind == voxel_kind::label) {
        if (scale) throw not_a_label_map("label map carries intensity scaling");
        v.labels.resize(n);
        for (size_t i = 0; i < n; ++i) {
            T raw = get<T>(data + i * sizeof(T), swap);
            auto val = static_cast<int64_t>(raw);
            if (val < 0) throw not_a_label_map("negative voxel value in label map");
            v.labels[i] = static_cast<int32_t>(val);
        }
    } else {
        v.values.resize(n);
        for (size_t i = 0; i < n; ++i) {
            double val = static_cast<double>(get<T>(data + i * sizeof(T), swap));
            v.values[i] = scale ? val * slope + inter : val;
        }
    }
}

inline std::array<std::array<double, 3>, 3> quaternion_to_direction(
    double b, double c, double d, double qfac) {
    double t = 1.0 - (b * b + c * c + d * d);
    double a = t > 0 ? std::sqrt(t) : 0.0;
    std::array<std::array<double, 3>, 3> r{};
    r[0][0] = a * a + b * b - c * c - d * d;
    r[0][1] = 2 * b * c - 2 * a * d;
    r[0][2] = (2 * b * d + 2 * a * c) * qfac;
    r[1][0] = 2 * b * c + 2 * a * d;
    r[1][1] = a * a + c * c - b * b - d * d;
    r[1][2] = (2 * c * d - 2 * a * b) * qfac;
    r[2][0] = 2 * b * d - 2 * a * c;
    r[2][1] = 2 * c * d + 2 * a * b;
    r[2][2] = (a * a + d * d - c * c - b * b) * qfac;
    return r;
}

} // namespace detail

inline volume load_volume(const std::filesystem::path& path, voxel_kind kind) {
    using namespace detail;
    if (!std::filesystem::exists(path)) throw io_error("no such file: " + path.string());
    std::vector<uint8_t> buf = read_all(path);
    if (buf.size() < 352) throw malformed_header("file shorter than a NIfTI-1 header");

    bool swap = false;
    int32_t sizeof_hdr = get<int32_t>(buf.data(), false);
    if (sizeof_hdr != 348) {
        swap = true;
        sizeof_hdr = get<int32_t>(buf.data(), true);
        if (sizeof_hdr != 348) throw malformed_header("sizeof_hdr != 348");
    }

    char magic[4];
    std::memcpy(magic, buf.data() + 344, 4);
    const bool n1 = std::memcmp(magic, "n+1", 4) == 0;
    const bool ni1 = std::memcmp(magic, "ni1", 4) == 0;
    if (!n1 && !ni1) throw malformed_header("bad magic");
    if (ni1) throw io_error("two-file (hdr/img) NIfTI not supported");

    std::array<int16_t, 8> dim;
    for (int i = 0; i < 8; ++i) dim[i] = get<int16_t>(buf.data() + 40 + 2 * i, swap);
    if (dim[0] < 1 || dim[0] > 7) throw malformed_header("invalid dim[0]");
    for (int i = dim[0] + 1; i < 8; ++i) dim[i] = 1;
    for (int i = 1; i <= std::min<int>(dim[0], 3); ++i)
        if (dim[i] < 1) throw dimension_mismatch("non-positive spatial dimension");
    for (int i = 4; i <= dim[0]; ++i)
        if (dim[i] > 1) throw dimension_mismatch("volumes with a 4th dimension are not supported");

    const int16_t datatype = get<int16_t>(buf.data() + 70, swap);
    if (kind == voxel_kind::label && !label_datatype(datatype))
        throw unsupported_datatype("datatype " + std::to_string(datatype) + " not supported for label maps");
    if (kind == voxel_kind::intensity && !intensity_datatype(datatype))
        throw unsupported_datatype("datatype " + std::to_string(datatype) + " not supported for intensity volumes");

    std::array<float, 8> pixdim;
    for (int i = 0; i < 8; ++i) pixdim[i] = get<float>(buf.data() + 76 + 4 * i, swap);

    const double vox_offset = get<float>(buf.data() + 108, swap);
    const double slope = get<float>(buf.data() + 112, swap);
    const double inter = get<float>(buf.data() + 116, swap);
    const int16_t qform_code = get<int16_t>(buf.data() + 252, swap);
    const int16_t sform_code = get<int16_t>(buf.data() + 254, swap);

    volume v;
    v.kind = kind;
    v.source_datatype = datatype;
    v.dims = {dim[1], dim[2], dim[3]};

    bool affine_set = false;
    if (sform_code > 0) {
        std::array<std::array<double, 4>, 3> srow{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c)
                srow[r][c] = get<float>(buf.data() + 280 + 16 * r + 4 * c, swap);
        std::array<double, 3> norms{};
        for (int c = 0; c < 3; ++c)
            norms[c] = std::sqrt(srow[0][c] * srow[0][c] + srow[1][c] * srow[1][c] +
                                 srow[2][c] * srow[2][c]);
        if (norms[0] > 0 && norms[1] > 0 && norms[2] > 0) {
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    v.direction[r][c] = srow[r][c] / norms[c];
            v.spacing_mm = norms;
            v.origin_mm = {srow[0][3], srow[1][3], srow[2][3]};
            affine_set = true;
        }
    }
    if (!affine_set && qform_code > 0) {
        const double qb = get<float>(buf.data() + 256, swap);
        const double qc = get<float>(buf.data() + 260, swap);
        const double qd = get<float>(buf.data() + 264, swap);
        const double qfac = pixdim[0] == 0.0f ? 1.0 : static_cast<double>(pixdim[0]);
        v.direction = detail::quaternion_to_direction(qb, qc, qd, qfac >= 0 ? 1.0 : -1.0);
        v.spacing_mm = {pixdim[1], pixdim[2], pixdim[3]};
        v.origin_mm = {get<float>(buf.data() + 268, swap), get<float>(buf.data() + 272, swap),
                       get<float>(buf.data() + 276, swap)};
        affine_set = true;
    }
    if (!affine_set) {
        v.spacing_mm = {pixdim[1] > 0 ? pixdim[1] : 1.0, pixdim[2] > 0 ? pixdim[2] : 1.0,
                        pixdim[3] > 0 ? pixdim[3] : 1.0};
    }
    for (double s : v.spacing_mm)
        if (!(s > 0)) throw malformed_header("non-positive voxel spacing");

    const size_t n = v.voxel_count();
    const size_t bpv = static_cast<size_t>(bytes_per_voxel(datatype));
    if (vox_offset < 348 || static_cast<size_t>(vox_offset) > buf.size())
        throw malformed_header("invalid vox_offset");
    const size_t offset = static_cast<size_t>(vox_offset);
    if (buf.size() - offset < n * bpv)
        throw dimension_mismatch("voxel data shorter than dims product");

    const uint8_t* data = buf.data() + offset;
    switch (datatype) {
        case dt_uint8: detail::decode_voxels<uint8_t>(data, n, swap, v, slope, inter); break;
        case dt_int16: detail::decode_voxels<int16_t>(data, n, swap, v, slope, inter); break;
        case dt_uint16: detail::decode_voxels<uint16_t>(data, n, swap, v, slope, inter); break;
        case dt_int32: detail::decode_voxels<int32_t>(data, n, swap, v, slope, inter); break;
        case dt_float32: detail::decode_voxels<float>(data, n, swap, v, slope, inter); break;
        case dt_float64: detail::decode_voxels<double>(data, n, swap, v, slope, inter); break;
        default: throw unsupported_datatype("datatype " + std::to_string(datatype));
    }
    return v;
}

// Serializes the volume as a little-endian single-file NIfTI-1 with an sform
// affine. The datatype defaults to the volume's source datatype, or uint8 /
// float32 for volumes built in memory.
inline void save_volume(const volume& v, const std::filesystem::path& path,
                        int16_t datatype = 0) {
    using namespace detail;
    v.validate();
    if (datatype == 0)
        datatype = v.source_datatype != 0
                       ? v.source_datatype
                       : (v.kind == voxel_kind::label ? dt_uint8 : dt_float32);
    if (v.kind == voxel_kind::label && !label_datatype(datatype))
        throw unsupported_datatype("datatype " + std::to_string(datatype) + " not supported for label maps");
    if (v.kind == voxel_kind::intensity && !intensity_datatype(datatype))
        throw unsupported_datatype("datatype " + std::to_string(datatype) + " not supported for intensity volumes");
    if (!host_is_little_endian()) throw io_error("writer requires a little-endian host");

    const size_t n = v.voxel_count();
    const size_t bpv = static_cast<size_t>(bytes_per_voxel(datatype));
    std::vector<uint8_t> out(352 + n * bpv, 0);

    put<int32_t>(out, 0, 348);
    out[38] = 'r'; // regular
    put<int16_t>(out, 40, 3);
    for (int i = 0; i < 3; ++i) put<int16_t>(out, 42 + 2 * i, static_cast<int16_t>(v.dims[i]));
    for (int i = 3; i < 7; ++i) put<int16_t>(out, 42 + 2 * i, 1);
    put<int16_t>(out, 70, datatype);
    put<int16_t>(out, 72, static_cast<int16_t>(bpv * 8));
    put<float>(out, 76, 1.0f); // qfac
    for (int i = 0; i < 3; ++i) put<float>(out, 80 + 4 * i, static_cast<float>(v.spacing_mm[i]));
    put<float>(out, 108, 352.0f); // vox_offset
    put<float>(out, 112, 0.0f);   // scl_slope: values stored raw
    put<float>(out, 116, 0.0f);
    const char descrip[] = "bodyregion";
    std::memcpy(out.data() + 148, descrip, sizeof(descrip));
    put<int16_t>(out, 252, 0); // qform_code
    put<int16_t>(out, 254, 1); // sform_code: scanner anatomical
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
            put<float>(out, 280 + 16 * r + 4 * c,
                       static_cast<float>(v.direction[r][c] * v.spacing_mm[c]));
        put<float>(out, 280 + 16 * r + 12, static_cast<float>(v.origin_mm[r]));
    }
    std::memcpy(out.data() + 344, "n+1", 4);

    uint8_t* data = out.data() + 352;
    auto encode = [&](auto tag) {
        using T = decltype(tag);
        for (size_t i = 0; i < n; ++i) {
            T enc;
            if (v.kind == voxel_kind::label)
                enc = static_cast<T>(v.labels[i]);
            else if constexpr (std::is_floating_point_v<T>)
                enc = static_cast<T>(v.values[i]);
            else
                enc = static_cast<T>(std::llround(v.values[i]));
            std::memcpy(data + i * sizeof(T), &enc, sizeof(T));
        }
    };
    switch (datatype) {
        case dt_uint8: encode(uint8_t{}); break;
        case dt_int16: encode(int16_t{}); break;
        case dt_uint16: encode(uint16_t{}); break;
        case dt_int32: encode(int32_t{}); break;
        case dt_float32: encode(float{}); break;
        case dt_float64: encode(double{}); break;
        default: throw unsupported_datatype("datatype " + std::to_string(datatype));
    }

    const std::string name = path.string();
    const bool gz = name.size() > 3 && name.compare(name.size() - 3, 3, ".gz") == 0;
    if (gz) {
        gzFile f = gzopen(name.c_str(), "wb6");
        if (!f) throw io_error("cannot create " + name);
        size_t written = 0;
        while (written < out.size()) {
            unsigned step = static_cast<unsigned>(std::min<size_t>(out.size() - written, 1u << 28));
            int w = gzwrite(f, out.data() + written, step);
            if (w <= 0) { gzclose(f); throw io_error("write error in " + name); }
            written += static_cast<size_t>(w);
        }
        if (gzclose(f) != Z_OK) throw io_error("close error in " + name);
    } else {
        FILE* f = std::fopen(name.c_str(), "wb");
        if (!f) throw io_error("cannot create " + name);
        size_t w = std::fwrite(out.data(), 1, out.size(), f);
        bool bad = w != out.size();
        bad |= std::fclose(f) != 0;
        if (bad) throw io_error("write error in " + name);
    }
}

} // namespace nifti

using nifti::load_volume;
using nifti::save_volume;

} // namespace bodyregion
