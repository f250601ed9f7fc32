#include "trxcat/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trxcat/error.hpp"
#include "trxcat/rng.hpp"
#include "trxcat/text.hpp"
#include "trxcat/tomlmini.hpp"

namespace trxcat {

SignConstraint parse_sign(const std::string& text) {
    if (text == "income") return SignConstraint::income;
    if (text == "expense") return SignConstraint::expense;
    if (text == "any") return SignConstraint::any;
    throw_config("unknown sign constraint '" + text + "' (want income|expense|any)");
}

std::string sign_to_string(SignConstraint sign) {
    switch (sign) {
        case SignConstraint::income: return "income";
        case SignConstraint::expense: return "expense";
        case SignConstraint::any: return "any";
    }
    return "any";
}

void SynthConfig::validate() const {
    if (duplicate_rate < 0.0 || duplicate_rate > 1.0) {
        throw_config("duplicate_rate must lie in [0, 1]");
    }
    if (!is_valid_date(date_begin) || !is_valid_date(date_end) ||
        to_day_number(date_begin) > to_day_number(date_end)) {
        throw_config("invalid date_range");
    }
    if (n_records > 0 && categories.empty()) {
        throw_config("at least one category is required");
    }
    for (const auto& cat : categories) {
        if (cat.label.empty()) throw_config("category with empty label");
        if (!(cat.weight > 0.0)) throw_config("category '" + cat.label + "': weight must be positive");
        if (cat.templates.empty()) throw_config("category '" + cat.label + "': no templates");
        if (cat.value_min_cents <= 0 || cat.value_min_cents > cat.value_max_cents) {
            throw_config("category '" + cat.label + "': bad value_range");
        }
    }
}

namespace {

struct RecordPlan {
    std::size_t category = 0;
    std::size_t template_index = 0;
    // Stable draws ({lex:*}, {cc}, {ref}) in occurrence order; perturbed
    // copies reuse these and resample everything else.
    std::vector<std::string> stable_draws;
};

class Renderer {
public:
    Renderer(const SynthConfig& config) : config_(config) {}

    std::string render(const std::string& tmpl, const Date& date, std::int64_t value_cents,
                       Rng& rng, std::vector<std::string>& stable_draws, bool replaying) {
        std::string out;
        std::size_t stable_pos = 0;
        std::size_t i = 0;
        while (i < tmpl.size()) {
            if (tmpl[i] != '{') {
                out.push_back(tmpl[i++]);
                continue;
            }
            std::size_t close = tmpl.find('}', i);
            if (close == std::string::npos) throw_config("unterminated placeholder in template '" + tmpl + "'");
            std::string slot = tmpl.substr(i + 1, close - i - 1);
            out += expand(slot, date, value_cents, rng, stable_draws, stable_pos, replaying);
            i = close + 1;
        }
        return out;
    }

private:
    const SynthConfig& config_;

    const std::vector<std::string>& lexicon(const std::string& key) const {
        auto it = config_.lexicons.find(key);
        if (it == config_.lexicons.end() || it->second.empty()) {
            throw_config("template references missing or empty lexicon '" + key + "'");
        }
        return it->second;
    }

    std::string stable_draw(const std::vector<std::string>& pool, Rng& rng,
                            std::vector<std::string>& stable_draws, std::size_t& stable_pos,
                            bool replaying) {
        if (replaying) {
            if (stable_pos >= stable_draws.size()) {
                throw_config("template/plan mismatch while replaying a duplicate");
            }
            return stable_draws[stable_pos++];
        }
        std::string value = pool[rng.below(pool.size())];
        stable_draws.push_back(value);
        ++stable_pos;
        return value;
    }

    std::string digits(Rng& rng, int n) {
        std::string out;
        for (int k = 0; k < n; ++k) out.push_back(static_cast<char>('0' + rng.below(10)));
        return out;
    }

    std::string letters(Rng& rng, int n) {
        std::string out;
        for (int k = 0; k < n; ++k) out.push_back(static_cast<char>('a' + rng.below(26)));
        return out;
    }

    std::string expand(const std::string& slot, const Date& date, std::int64_t value_cents,
                       Rng& rng, std::vector<std::string>& stable_draws, std::size_t& stable_pos,
                       bool replaying) {
        char buf[32];
        std::int64_t abs_cents = value_cents < 0 ? -value_cents : value_cents;
        if (slot == "date6") {
            std::snprintf(buf, sizeof(buf), "%02d%02d%02d", date.day, date.month, date.year % 100);
            return buf;
        }
        if (slot == "date_slash") {
            std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d", date.day, date.month, date.year);
            return buf;
        }
        if (slot == "date_dot") {
            std::snprintf(buf, sizeof(buf), "%02d.%02d.%04d", date.day, date.month, date.year);
            return buf;
        }
        if (slot == "month_dot") {
            std::snprintf(buf, sizeof(buf), "%02d.%04d", date.month, date.year);
            return buf;
        }
        if (slot == "amount_fr") {
            std::snprintf(buf, sizeof(buf), "%lld,%02lld", static_cast<long long>(abs_cents / 100),
                          static_cast<long long>(abs_cents % 100));
            return buf;
        }
        if (slot == "amount_eur") {
            std::snprintf(buf, sizeof(buf), "%lld,%02lldeur", static_cast<long long>(abs_cents / 100),
                          static_cast<long long>(abs_cents % 100));
            return buf;
        }
        if (slot == "amount_dot") {
            std::snprintf(buf, sizeof(buf), "%lld.%lld", static_cast<long long>(abs_cents / 100),
                          static_cast<long long>((abs_cents % 100) / 10));
            return buf;
        }
        if (slot == "card4") return digits(rng, 4);
        if (slot == "digits3") return digits(rng, 3);
        if (slot == "postal") return digits(rng, 5);
        if (slot == "ref") {
            // Letter-bracketed so no 4-digit run survives inside the token.
            return letters(rng, 3) + digits(rng, 3) + letters(rng, 1);
        }
        if (slot == "name" || slot == "surname") {
            if (config_.names.empty()) throw_config("template uses {" + slot + "} but no names are configured");
            return to_lower(config_.names[rng.below(config_.names.size())]);
        }
        if (slot == "city") {
            const auto& pool = lexicon("cities");
            return pool[rng.below(pool.size())];
        }
        if (slot == "civility") {
            const auto& pool = lexicon("civility");
            return pool[rng.below(pool.size())];
        }
        if (slot == "cc") {
            return stable_draw(lexicon("country_codes"), rng, stable_draws, stable_pos, replaying);
        }
        if (slot.starts_with("lex:")) {
            return stable_draw(lexicon(slot.substr(4)), rng, stable_draws, stable_pos, replaying);
        }
        throw_config("unknown template placeholder '{" + slot + "}'");
    }
};

}  // namespace

Dataset generate_synthetic(const SynthConfig& config) {
    config.validate();
    Dataset dataset;
    for (const auto& cat : config.categories) dataset.taxonomy.push_back(cat.label);
    if (config.n_records == 0) return dataset;

    std::vector<double> weights;
    weights.reserve(config.categories.size());
    for (const auto& cat : config.categories) weights.push_back(cat.weight);

    const std::int64_t day_begin = to_day_number(config.date_begin);
    const std::int64_t day_span = to_day_number(config.date_end) - day_begin + 1;

    Renderer renderer(config);
    std::vector<RecordPlan> plans;
    plans.reserve(config.n_records);
    dataset.records.reserve(config.n_records);

    for (std::size_t i = 0; i < config.n_records; ++i) {
        Rng rng = Rng::substream(config.seed, i);

        RecordPlan plan;
        bool replaying = false;
        if (i > 0 && rng.chance(config.duplicate_rate)) {
            plan = plans[rng.below(i)];
            replaying = true;
        } else {
            plan.category = rng.pick_weighted(weights);
            const auto& cat = config.categories[plan.category];
            plan.template_index = rng.below(cat.templates.size());
        }
        const SynthCategory& cat = config.categories[plan.category];

        Transaction t;
        char idbuf[24];
        std::snprintf(idbuf, sizeof(idbuf), "s%08zu", i);
        t.id = idbuf;
        t.date = from_day_number(day_begin + static_cast<std::int64_t>(rng.below(
                                                 static_cast<std::uint64_t>(day_span))));

        std::int64_t magnitude =
            cat.value_min_cents +
            static_cast<std::int64_t>(rng.below(
                static_cast<std::uint64_t>(cat.value_max_cents - cat.value_min_cents + 1)));
        bool expense = cat.sign == SignConstraint::expense ||
                       (cat.sign == SignConstraint::any && rng.chance(0.5));
        t.value_cents = expense ? -magnitude : magnitude;
        t.category = cat.label;

        t.description = renderer.render(cat.templates[plan.template_index], t.date, t.value_cents,
                                        rng, plan.stable_draws, replaying);

        plans.push_back(plan);
        dataset.records.push_back(std::move(t));
    }
    return dataset;
}

SynthConfig load_synth_config(const std::string& path) {
    nlohmann::json doc = load_config_file(path);
    SynthConfig config;
    try {
        config.seed = doc.value("seed", std::uint64_t{0});
        config.n_records = doc.value("n_records", std::size_t{0});
        config.duplicate_rate = doc.value("duplicate_rate", 0.0);
        if (doc.contains("date_range")) {
            const auto& range = doc.at("date_range");
            config.date_begin = parse_iso_date(range.at(0).get<std::string>());
            config.date_end = parse_iso_date(range.at(1).get<std::string>());
        }
        if (doc.contains("lexicons")) {
            for (const auto& [key, value] : doc.at("lexicons").items()) {
                config.lexicons[key] = value.get<std::vector<std::string>>();
            }
        }
        for (const auto& entry : doc.value("categories", nlohmann::json::array())) {
            SynthCategory cat;
            cat.label = entry.at("label").get<std::string>();
            cat.sign = parse_sign(entry.value("sign", std::string("expense")));
            cat.weight = entry.value("weight", 1.0);
            if (entry.contains("value_range")) {
                double lo = entry.at("value_range").at(0).get<double>();
                double hi = entry.at("value_range").at(1).get<double>();
                cat.value_min_cents = static_cast<std::int64_t>(lo * 100.0 + 0.5);
                cat.value_max_cents = static_cast<std::int64_t>(hi * 100.0 + 0.5);
            }
            cat.templates = entry.at("templates").get<std::vector<std::string>>();
            config.categories.push_back(std::move(cat));
        }
        if (doc.contains("names_file")) {
            auto names_path = std::filesystem::path(path).parent_path() /
                              doc.at("names_file").get<std::string>();
            std::ifstream in(names_path);
            if (!in) throw_io("cannot open names file '" + names_path.string() + "'");
            std::string line;
            while (std::getline(in, line)) {
                std::string name = trim(line);
                if (!name.empty() && name[0] != '#') config.names.push_back(name);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw_config("bad synth config '" + path + "': " + e.what());
    }
    config.validate();
    return config;
}

}  // namespace trxcat
