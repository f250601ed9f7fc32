#include "trxcat/tomlmini.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "trxcat/error.hpp"

namespace trxcat {

namespace {

using nlohmann::json;

class TomlParser {
public:
    explicit TomlParser(std::string_view text) : text_(text) {}

    json parse() {
        json root = json::object();
        json* current = &root;
        while (!at_end()) {
            skip_blank();
            if (at_end()) break;
            if (peek() == '[') {
                current = parse_table_header(root);
            } else {
                parse_key_value(*current);
            }
        }
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw_config("toml parse error at line " + std::to_string(line_) + ": " + msg);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_spaces() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }

    void skip_comment() {
        while (!at_end() && peek() != '\n') advance();
    }

    // Skips whitespace, newlines and comments between statements.
    void skip_blank() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    void expect_line_end() {
        skip_spaces();
        if (at_end()) return;
        if (peek() == '#') {
            skip_comment();
            return;
        }
        if (peek() == '\n') return;
        fail("unexpected trailing content");
    }

    std::string parse_bare_or_quoted_key() {
        skip_spaces();
        if (at_end()) fail("expected key");
        if (peek() == '"') return parse_basic_string();
        std::string key;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(advance());
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected key");
        return key;
    }

    std::vector<std::string> parse_dotted_name() {
        std::vector<std::string> parts{parse_bare_or_quoted_key()};
        skip_spaces();
        while (!at_end() && peek() == '.') {
            advance();
            parts.push_back(parse_bare_or_quoted_key());
            skip_spaces();
        }
        return parts;
    }

    json* parse_table_header(json& root) {
        advance();  // '['
        bool array_of_tables = false;
        if (!at_end() && peek() == '[') {
            advance();
            array_of_tables = true;
        }
        auto parts = parse_dotted_name();
        skip_spaces();
        if (at_end() || advance() != ']') fail("expected ']'");
        if (array_of_tables) {
            if (at_end() || advance() != ']') fail("expected ']]'");
        }
        expect_line_end();

        json* node = &root;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const std::string& key = parts[i];
            bool last = (i + 1 == parts.size());
            if (last && array_of_tables) {
                if (!node->contains(key)) (*node)[key] = json::array();
                if (!(*node)[key].is_array()) fail("'" + key + "' is not an array of tables");
                (*node)[key].push_back(json::object());
                node = &(*node)[key].back();
            } else {
                if (!node->contains(key)) (*node)[key] = json::object();
                json& next = (*node)[key];
                if (next.is_array()) {
                    if (next.empty()) fail("'" + key + "' is an empty table array");
                    node = &next.back();
                } else if (next.is_object()) {
                    node = &next;
                } else {
                    fail("'" + key + "' is not a table");
                }
            }
        }
        return node;
    }

    void parse_key_value(json& table) {
        auto parts = parse_dotted_name();
        skip_spaces();
        if (at_end() || advance() != '=') fail("expected '='");
        json value = parse_value();
        expect_line_end();

        json* node = &table;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
            node = &(*node)[parts[i]];
            if (!node->is_object()) fail("'" + parts[i] + "' is not a table");
        }
        if (node->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
        (*node)[parts.back()] = std::move(value);
    }

    json parse_value() {
        skip_spaces();
        if (at_end()) fail("expected value");
        char c = peek();
        if (c == '"') return parse_basic_string();
        if (c == '\'') return parse_literal_string();
        if (c == '[') return parse_array();
        if (c == 't' || c == 'f') return parse_boolean();
        return parse_number();
    }

    std::string parse_basic_string() {
        advance();  // '"'
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string");
            char c = advance();
            if (c == '"') break;
            if (c == '\n') fail("newline in string");
            if (c == '\\') {
                if (at_end()) fail("bad escape");
                char e = advance();
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    std::string parse_literal_string() {
        advance();  // '\''
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string");
            char c = advance();
            if (c == '\'') break;
            if (c == '\n') fail("newline in string");
            out.push_back(c);
        }
        return out;
    }

    json parse_array() {
        advance();  // '['
        json arr = json::array();
        while (true) {
            skip_blank();
            if (at_end()) fail("unterminated array");
            if (peek() == ']') {
                advance();
                break;
            }
            arr.push_back(parse_value());
            skip_blank();
            if (at_end()) fail("unterminated array");
            if (peek() == ',') {
                advance();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        return arr;
    }

    json parse_boolean() {
        if (text_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (text_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        fail("expected boolean");
    }

    json parse_number() {
        std::size_t start = pos_;
        bool is_float = false;
        if (!at_end() && (peek() == '+' || peek() == '-')) advance();
        while (!at_end()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
                advance();
            } else if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                advance();
                if (!at_end() && (peek() == '+' || peek() == '-')) advance();
            } else {
                break;
            }
        }
        std::string token(text_.substr(start, pos_ - start));
        std::erase(token, '_');
        if (token.empty() || token == "+" || token == "-") fail("expected number");
        try {
            if (is_float) return std::stod(token);
            return static_cast<std::int64_t>(std::stoll(token));
        } catch (const std::exception&) {
            fail("bad number '" + token + "'");
        }
    }
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) {
    return TomlParser(text).parse();
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    bool toml = path.ends_with(".toml") || path.ends_with(".tml");
    if (toml) return parse_toml(text);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw_config("cannot parse '" + path + "' as JSON: " + e.what());
    }
}

}  // namespace trxcat
