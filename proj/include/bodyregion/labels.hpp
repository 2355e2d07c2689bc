#pragma once

// Region-label algebra: parse, normalize, validate, order, and format
// compound labels such as "chest+abdomen+pelvis".

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bodyregion/errors.hpp"
#include "bodyregion/region.hpp"

namespace bodyregion {

// Validated set of region labels. Never empty once constructed through the
// public factories; "other" never co-occurs with a named region.
class region_set {
public:
    region_set() = default;

    static region_set of(std::initializer_list<region> rs) {
        region_set s;
        for (region r : rs) s.add(r);
        return s;
    }

    static region_set other() { return of({region::other}); }

    void add(region r) {
        if (r == region::other) {
            if (bits_ != 0 && !contains(region::other))
                throw mixed_other("'other' cannot be combined with a named region");
        } else if (contains(region::other)) {
            throw mixed_other("'other' cannot be combined with a named region");
        }
        bits_ |= bit(r);
    }

    bool contains(region r) const { return (bits_ & bit(r)) != 0; }
    bool empty() const { return bits_ == 0; }
    bool is_other() const { return bits_ == bit(region::other); }

    int size() const {
        int n = 0;
        for (region r : all_regions()) n += contains(r) ? 1 : 0;
        return n;
    }

    // Members in canonical cranio-caudal order ("other" stands alone).
    std::vector<region> ordered() const {
        std::vector<region> out;
        for (region r : region_order())
            if (contains(r)) out.push_back(r);
        if (contains(region::other)) out.push_back(region::other);
        return out;
    }

    friend bool operator==(const region_set&, const region_set&) = default;

private:
    static unsigned bit(region r) { return 1u << region_index(r); }
    unsigned bits_ = 0;
};

// Canonical serialization: lowercase, '+'-joined, cranio-caudal order.
inline std::string format(const region_set& rs) {
    if (rs.empty()) throw error("cannot format an empty region set");
    std::string out;
    for (region r : rs.ordered()) {
        if (!out.empty()) out += '+';
        out += region_name(r);
    }
    return out;
}

// Strict parse of a canonical '+'-joined label. No synonyms.
inline region_set parse(std::string_view text) {
    if (text.empty()) throw empty_input("empty label");
    region_set rs;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t next = text.find('+', pos);
        std::string_view tok = text.substr(pos, next == std::string_view::npos ? next : next - pos);
        auto r = region_from_name(tok);
        if (!r) throw unknown_token("unknown region token: '" + std::string(tok) + "'");
        rs.add(*r); // throws mixed_other on "other+chest"
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return rs;
}

// Maps free-text phrases to regions. Keys are lowercase space-separated
// word sequences; longest phrase wins during matching.
class synonym_table {
public:
    synonym_table() : entries_(defaults()) {}

    static std::map<std::string, region> defaults() {
        return {
            {"head", region::head},
            {"neck", region::neck},
            {"chest", region::chest},
            {"abdomen", region::abdomen},
            {"pelvis", region::pelvis},
            {"other", region::other},
            {"lower abdomen", region::abdomen},
            {"upper abdomen", region::abdomen},
            {"thorax", region::chest},
            {"thoracic", region::chest},
            {"skull", region::head},
            {"brain", region::head},
            {"cranial", region::head},
            {"hip", region::pelvis},
            {"pelvic", region::pelvis},
            {"abdominal", region::abdomen},
            {"cervical spine", region::neck},
        };
    }

    void add(const std::string& phrase, region r) { entries_[phrase] = r; }

    const std::map<std::string, region>& entries() const { return entries_; }

    size_t max_phrase_words() const {
        size_t m = 1;
        for (const auto& [k, _] : entries_)
            m = std::max(m, static_cast<size_t>(std::count(k.begin(), k.end(), ' ') + 1));
        return m;
    }

private:
    std::map<std::string, region> entries_;
};

struct normalize_result {
    region_set set;
    std::vector<std::string> dropped; // tokens that matched no entry
};

// Case/whitespace/punctuation-insensitive normalization of free text into a
// region set. Unknown tokens alongside valid ones are dropped; if no valid
// region token exists the result collapses to {other}.
inline normalize_result normalize_ex(std::string_view freetext,
                                     const synonym_table& table = synonym_table{}) {
    bool blank = true;
    for (char c : freetext)
        if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
    if (blank) throw empty_input("blank input");

    std::vector<std::string> words;
    std::string cur;
    for (char c : freetext) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(cur);

    normalize_result out;
    std::vector<region> named;
    const size_t max_words = table.max_phrase_words();
    size_t i = 0;
    while (i < words.size()) {
        size_t taken = 0;
        for (size_t len = std::min(max_words, words.size() - i); len >= 1; --len) {
            std::string phrase = words[i];
            for (size_t k = 1; k < len; ++k) phrase += ' ' + words[i + k];
            auto it = table.entries().find(phrase);
            if (it != table.entries().end()) {
                if (it->second != region::other) named.push_back(it->second);
                taken = len;
                break;
            }
        }
        if (taken == 0) {
            out.dropped.push_back(words[i]);
            i += 1;
        } else {
            i += taken;
        }
    }

    if (!named.empty()) {
        for (region r : named) out.set.add(r);
    } else {
        out.set = region_set::other();
    }
    return out;
}

inline region_set normalize(std::string_view freetext,
                            const synonym_table& table = synonym_table{}) {
    return normalize_ex(freetext, table).set;
}

} // namespace bodyregion
