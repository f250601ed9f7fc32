#include "trxcat/cleaning.hpp"

#include <fstream>

#include "trxcat/error.hpp"
#include "trxcat/text.hpp"
#include "trxcat/tomlmini.hpp"

namespace trxcat {

void CleaningConfig::PatternSet::add(const std::string& pattern) {
    try {
        compiled.emplace_back(pattern, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw_config("bad pattern '" + pattern + "': " + e.what());
    }
    sources.push_back(pattern);
}

bool CleaningConfig::PatternSet::matches_anywhere(const std::string& text) const {
    for (const auto& re : compiled) {
        if (std::regex_search(text, re)) return true;
    }
    return false;
}

void CleaningConfig::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& cls : synonym_classes) {
        if (cls.canonical.empty()) throw_config("synonym class with empty canonical token");
        for (const auto& phrase : cls.members) {
            std::string key = join(phrase);
            if (key.empty()) throw_config("synonym class with empty member");
            if (!seen.insert(key).second) {
                throw_config("synonym classes overlap on '" + key + "'");
            }
        }
    }
}

namespace {

std::string apply_patterns(std::string text, const CleaningConfig::PatternSet& patterns) {
    for (const auto& re : patterns.compiled) {
        text = std::regex_replace(text, re, " ");
    }
    return text;
}

std::string strip_punctuation(const std::string& text) {
    static constexpr std::string_view kPunct = ",;:/()*=";
    std::string out = text;
    for (char& c : out) {
        if (kPunct.find(c) != std::string_view::npos) c = ' ';
    }
    return out;
}

// Longest synonym phrase matching at position i; returns (class index,
// phrase length) or (npos, 0).
std::pair<std::size_t, std::size_t> match_synonym(const std::vector<std::string>& tokens,
                                                  std::size_t i,
                                                  const std::vector<SynonymClass>& classes) {
    std::size_t best_class = std::string::npos;
    std::size_t best_len = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (const auto& phrase : classes[c].members) {
            if (phrase.size() <= best_len || i + phrase.size() > tokens.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < phrase.size(); ++k) {
                if (tokens[i + k] != phrase[k]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                best_class = c;
                best_len = phrase.size();
            }
        }
    }
    return {best_class, best_len};
}

}  // namespace

TokenSequence clean(const std::string& description, const CleaningConfig& config) {
    std::string text = fold_to_ascii(description);
    text = apply_patterns(std::move(text), config.date_patterns);
    text = apply_patterns(std::move(text), config.account_patterns);
    text = apply_patterns(std::move(text), config.amount_currency_patterns);
    text = apply_patterns(std::move(text), config.misc_patterns);
    text = strip_punctuation(text);

    std::vector<std::string> raw = split_whitespace(text);

    std::vector<std::string> kept;
    kept.reserve(raw.size());
    std::unordered_set<std::string> seen_tokens;
    std::vector<bool> seen_class(config.synonym_classes.size(), false);

    std::size_t i = 0;
    while (i < raw.size()) {
        if (config.stop_words.contains(raw[i])) {
            ++i;
            continue;
        }
        auto [cls, len] = match_synonym(raw, i, config.synonym_classes);
        if (cls != std::string::npos) {
            if (!seen_class[cls]) {
                seen_class[cls] = true;
                const std::string& canonical = config.synonym_classes[cls].canonical;
                if (seen_tokens.insert(canonical).second) kept.push_back(canonical);
            }
            i += len;
            continue;
        }
        if (seen_tokens.insert(raw[i]).second) kept.push_back(raw[i]);
        ++i;
    }

    TokenSequence out;
    out.tokens = std::move(kept);
    return out;
}

TokenSequence anonymize_names(const TokenSequence& tokens, const NameDictionary& dict) {
    TokenSequence out;
    out.source_id = tokens.source_id;
    out.tokens.reserve(tokens.tokens.size());
    bool previous_was_tag = false;
    for (const auto& token : tokens.tokens) {
        if (dict.names.contains(token)) {
            if (!previous_was_tag) out.tokens.push_back(dict.tag);
            previous_was_tag = true;
        } else {
            out.tokens.push_back(token);
            previous_was_tag = false;
        }
    }
    return out;
}

std::vector<TokenSequence> preprocess_dataset(const Dataset& dataset, const CleaningConfig& config,
                                              const NameDictionary& dict) {
    std::vector<TokenSequence> out;
    out.reserve(dataset.records.size());
    for (const Transaction& t : dataset.records) {
        TokenSequence seq = anonymize_names(clean(t.description, config), dict);
        seq.source_id = t.id;
        out.push_back(std::move(seq));
    }
    return out;
}

CleaningConfig cleaning_config_from_json(const nlohmann::json& doc) {
    CleaningConfig config;
    try {
        auto load_set = [&](const char* key, CleaningConfig::PatternSet& set) {
            for (const auto& p : doc.value(key, nlohmann::json::array())) {
                set.add(p.get<std::string>());
            }
        };
        load_set("date_patterns", config.date_patterns);
        load_set("account_patterns", config.account_patterns);
        load_set("amount_currency_patterns", config.amount_currency_patterns);
        load_set("misc_patterns", config.misc_patterns);

        if (doc.contains("cities") && !doc.at("cities").empty()) {
            std::string alternation = "\\b(";
            bool first = true;
            for (const auto& city : doc.at("cities")) {
                if (!first) alternation += "|";
                first = false;
                alternation += fold_to_ascii(city.get<std::string>());
            }
            alternation += ")\\b";
            config.misc_patterns.add(alternation);
        }

        for (const auto& word : doc.value("stop_words", nlohmann::json::array())) {
            config.stop_words.insert(fold_to_ascii(word.get<std::string>()));
        }

        for (const auto& entry : doc.value("synonym_classes", nlohmann::json::array())) {
            SynonymClass cls;
            cls.canonical = entry.at("canonical").get<std::string>();
            for (const auto& member : entry.at("members")) {
                cls.members.push_back(split_whitespace(fold_to_ascii(member.get<std::string>())));
            }
            config.synonym_classes.push_back(std::move(cls));
        }
    } catch (const nlohmann::json::exception& e) {
        throw_config(std::string("bad cleaning config: ") + e.what());
    }
    config.validate();
    return config;
}

CleaningConfig load_cleaning_config(const std::string& path) {
    return cleaning_config_from_json(load_config_file(path));
}

NameDictionary load_name_dictionary(const std::string& path, std::string tag) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open name dictionary '" + path + "'");
    NameDictionary dict;
    dict.tag = std::move(tag);
    std::string line;
    while (std::getline(in, line)) {
        std::string name = trim(line);
        if (name.empty() || name[0] == '#') continue;
        dict.names.insert(fold_to_ascii(name));
    }
    if (dict.names.empty()) throw_config("name dictionary '" + path + "' is empty");
    if (dict.names.contains(fold_to_ascii(dict.tag))) {
        throw_config("name dictionary contains its own tag");
    }
    return dict;
}

}  // namespace trxcat
