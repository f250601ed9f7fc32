#include "trxcat/text.hpp"

#include <cctype>
#include <unordered_map>

namespace trxcat {

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
    return out;
}

namespace {

// Codepoint -> ASCII replacement for the accented letters seen in French
// bank feeds. Case is folded here as well.
const std::unordered_map<char32_t, const char*>& accent_table() {
    static const std::unordered_map<char32_t, const char*> table = {
        {U'à', "a"}, {U'â', "a"}, {U'ä', "a"}, {U'á', "a"}, {U'ã', "a"},
        {U'ç', "c"},
        {U'è', "e"}, {U'é', "e"}, {U'ê', "e"}, {U'ë', "e"},
        {U'î', "i"}, {U'ï', "i"}, {U'í', "i"},
        {U'ô', "o"}, {U'ö', "o"}, {U'ó', "o"}, {U'õ', "o"},
        {U'ù', "u"}, {U'û', "u"}, {U'ü', "u"}, {U'ú', "u"},
        {U'ÿ', "y"},
        {U'œ', "oe"}, {U'æ', "ae"},
        {U'À', "a"}, {U'Â', "a"}, {U'Ä', "a"}, {U'Á', "a"}, {U'Ã', "a"},
        {U'Ç', "c"},
        {U'È', "e"}, {U'É', "e"}, {U'Ê', "e"}, {U'Ë', "e"},
        {U'Î', "i"}, {U'Ï', "i"}, {U'Í', "i"},
        {U'Ô', "o"}, {U'Ö', "o"}, {U'Ó', "o"}, {U'Õ', "o"},
        {U'Ù', "u"}, {U'Û', "u"}, {U'Ü', "u"}, {U'Ú', "u"},
        {U'Ÿ', "y"},
        {U'Œ', "oe"}, {U'Æ', "ae"},
    };
    return table;
}

// Decodes one UTF-8 sequence starting at i; returns codepoint and length.
// Malformed bytes decode as single-byte passthrough.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
    unsigned char c0 = static_cast<unsigned char>(s[i]);
    if (c0 < 0x80) return {c0, 1};
    auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xc0) == 0x80;
    };
    if ((c0 & 0xe0) == 0xc0 && cont(1)) {
        char32_t cp = (c0 & 0x1fu) << 6 | (static_cast<unsigned char>(s[i + 1]) & 0x3fu);
        return {cp, 2};
    }
    if ((c0 & 0xf0) == 0xe0 && cont(1) && cont(2)) {
        char32_t cp = (c0 & 0x0fu) << 12 | (static_cast<unsigned char>(s[i + 1]) & 0x3fu) << 6 |
                      (static_cast<unsigned char>(s[i + 2]) & 0x3fu);
        return {cp, 3};
    }
    if ((c0 & 0xf8) == 0xf0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = (c0 & 0x07u) << 18 | (static_cast<unsigned char>(s[i + 1]) & 0x3fu) << 12 |
                      (static_cast<unsigned char>(s[i + 2]) & 0x3fu) << 6 |
                      (static_cast<unsigned char>(s[i + 3]) & 0x3fu);
        return {cp, 4};
    }
    return {c0, 1};
}

}  // namespace

std::string fold_to_ascii(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    const auto& table = accent_table();
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(std::tolower(c)));
            ++i;
            continue;
        }
        auto [cp, len] = decode_utf8(s, i);
        auto it = table.find(cp);
        if (it != table.end()) {
            out += it->second;
        } else {
            out.append(s.substr(i, len));
        }
        i += len;
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i];
    }
    return out;
}

bool contains(std::string_view haystack, std::string_view needle) {
    return haystack.find(needle) != std::string_view::npos;
}

}  // namespace trxcat
