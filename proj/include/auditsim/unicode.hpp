#pragma once

#include <map>
#include <string>
#include <string_view>

#include "auditsim/common.hpp"

namespace auditsim {

/// Canonical composition limited to the Latin-1 precomposed range: a base
/// letter followed by a combining grave/acute/circumflex/tilde/diaeresis/
/// cedilla collapses into the precomposed code point. Query terms in the
/// audited languages never need more; anything outside the table passes
/// through untouched.
inline std::string normalize_nfc_latin(std::string_view in)
{
    static const std::map<std::pair<char32_t, char32_t>, char32_t> kCompose = [] {
        std::map<std::pair<char32_t, char32_t>, char32_t> m;
        struct Row {
            char32_t combining;
            const char* bases;
            const char32_t* composed;
        };
        // U+0300 grave, U+0301 acute, U+0302 circumflex, U+0303 tilde,
        // U+0308 diaeresis, U+0327 cedilla
        static const char32_t grave[] = {0xE0, 0xE8, 0xEC, 0xF2, 0xF9, 0xC0, 0xC8, 0xCC, 0xD2, 0xD9};
        static const char32_t acute[] = {0xE1, 0xE9, 0xED, 0xF3, 0xFA, 0xC1, 0xC9, 0xCD, 0xD3, 0xDA};
        static const char32_t circ[] = {0xE2, 0xEA, 0xEE, 0xF4, 0xFB, 0xC2, 0xCA, 0xCE, 0xD4, 0xDB};
        static const char32_t tilde[] = {0xE3, 0, 0, 0xF5, 0, 0xC3, 0, 0, 0xD5, 0};
        static const char32_t diaer[] = {0xE4, 0xEB, 0xEF, 0xF6, 0xFC, 0xC4, 0xCB, 0xCF, 0xD6, 0xDC};
        static const Row rows[] = {
            {0x0300, "aeiouAEIOU", grave},   {0x0301, "aeiouAEIOU", acute},
            {0x0302, "aeiouAEIOU", circ},    {0x0303, "aeiouAEIOU", tilde},
            {0x0308, "aeiouAEIOU", diaer},
        };
        for (const auto& row : rows)
            for (int i = 0; row.bases[i]; ++i)
                if (row.composed[i])
                    m[{static_cast<char32_t>(row.bases[i]), row.combining}] = row.composed[i];
        m[{U'n', 0x0303}] = 0xF1; // ñ
        m[{U'N', 0x0303}] = 0xD1;
        m[{U'c', 0x0327}] = 0xE7; // ç
        m[{U'C', 0x0327}] = 0xC7;
        m[{U'y', 0x0301}] = 0xFD; // ý
        m[{U'Y', 0x0301}] = 0xDD;
        return m;
    }();

    std::string out;
    out.reserve(in.size());
    char32_t pending = 0;
    bool has_pending = false;
    std::size_t i = 0;
    while (i < in.size()) {
        char32_t cp = utf8_next(in, i);
        if (has_pending) {
            auto it = kCompose.find({pending, cp});
            if (it != kCompose.end()) {
                utf8_append(out, it->second);
                has_pending = false;
                continue;
            }
            utf8_append(out, pending);
        }
        pending = cp;
        has_pending = true;
    }
    if (has_pending)
        utf8_append(out, pending);
    return out;
}

} // namespace auditsim
