#include "cli/config.hpp"

#include "common/error.hpp"
#include "common/util.hpp"

#include <fstream>

namespace kplug::cli {

const std::map<std::string, std::string>& RunConfig::defaults() {
    // Desk-scale defaults. Every hyperparameter any pipeline reads lives
    // here; unknown keys are rejected in set().
    static const std::map<std::string, std::string> d = {
        {"seed", "1"},

        // synthetic knowledge graph
        {"kb.n_entities", "300"},
        {"kb.n_relations", "12"},
        {"kb.n_types", "6"},
        {"kb.n_triples", "1500"},

        // TransE knowledge embeddings
        {"ke.dim", "16"},
        {"ke.margin", "1.0"},
        {"ke.epochs", "120"},
        {"ke.lr", "0.05"},
        {"ke.test_frac", "0.10"},
        {"ke.valid_frac", "0.05"},

        // encoder
        {"enc.d_model", "64"},
        {"enc.n_layers", "4"},
        {"enc.n_heads", "4"},
        {"enc.d_ff", "256"},
        {"enc.max_seq_len", "128"},
        {"enc.dropout", "0.1"},

        // corpus generation
        {"corpus.fact_sents", "2"},
        {"corpus.type_prob", "0.7"},
        {"corpus.filler_sents", "30"},
        {"corpus.heldout_frac", "0.1"},

        // task generation (per-label example counts)
        {"tasks.rel_train", "30"},
        {"tasks.rel_valid", "5"},
        {"tasks.rel_test", "20"},
        {"tasks.typing_train", "30"},
        {"tasks.typing_test", "15"},
        {"tasks.cloze_train", "25"},
        {"tasks.cloze_test", "10"},

        // masked-language-model pretraining
        {"pretrain.epochs", "20"},
        {"pretrain.batch", "16"},
        {"pretrain.lr", "1e-3"},
        {"pretrain.mask_rate", "0.15"},
        {"pretrain.insert_prob", "0.3"},

        // downstream adaptation
        {"adapt.method", "full"},
        {"adapt.epochs", "4"},
        {"adapt.batch", "8"},
        {"adapt.lr_full", "5e-4"},
        {"adapt.lr_lora", "2e-3"},
        {"adapt.lr_adapter", "2e-3"},
        {"adapt.lr_bitfit", "4e-3"},
        {"adapt.lora_rank", "4"},
        {"adapt.adapter_hidden", "16"},
        {"adapt.dropout", "0.1"},

        // map-tuning
        {"maptune.dropout", "0.25"},
        {"maptune.lr", "2e-3"},
        {"maptune.epochs", "3"},
        {"maptune.batch", "16"},
        {"maptune.strategy", "one_random_mention"},
        {"maptune.init", "random"},
        {"maptune.task_lr", "2e-3"},
        {"maptune.task_epochs", "4"},

        // few-shot episodes
        {"fewshot.n_way", "5"},
        {"fewshot.k_shot", "1"},
        {"fewshot.n_query", "4"},
        {"fewshot.episodes", "200"},
        {"fewshot.train_episodes", "300"},

        // domain adaptation
        {"domain.train_rels", "8"},

        // experiment sweeps
        {"sweep.rates", "0,0.15,0.25,0.35,0.45"},

        {"runtime.kernels", "auto"},
    };
    return d;
}

RunConfig::RunConfig() : values_(defaults()) {}

RunConfig RunConfig::from_file(const std::string& path) {
    require(file_exists(path), "data", "missing config file: " + path);
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return from_lines(lines);
}

RunConfig RunConfig::from_lines(const std::vector<std::string>& lines) {
    RunConfig cfg;
    for (const std::string& raw : lines) {
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos, "config", "bad config line (need key = value): " + raw);
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    require(defaults().count(key) != 0, "config", "unknown config key: " + key);
    values_[key] = value;
}

int64_t RunConfig::get_int(const std::string& key) const {
    const std::string s = get_str(key);
    try {
        size_t pos = 0;
        int64_t v = std::stoll(s, &pos);
        require(pos == s.size(), "config", "not an integer: " + key + " = " + s);
        return v;
    } catch (const std::invalid_argument&) {
        fail("config", "not an integer: " + key + " = " + s);
    } catch (const std::out_of_range&) {
        fail("config", "integer out of range: " + key + " = " + s);
    }
}

double RunConfig::get_double(const std::string& key) const {
    const std::string s = get_str(key);
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        require(pos == s.size(), "config", "not a number: " + key + " = " + s);
        return v;
    } catch (const std::invalid_argument&) {
        fail("config", "not a number: " + key + " = " + s);
    } catch (const std::out_of_range&) {
        fail("config", "number out of range: " + key + " = " + s);
    }
}

std::string RunConfig::get_str(const std::string& key) const {
    auto it = values_.find(key);
    require(it != values_.end(), "config", "unknown config key: " + key);
    return it->second;
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string s = get_str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail("config", "not a boolean: " + key + " = " + s);
}

std::vector<int64_t> RunConfig::get_int_list(const std::string& key) const {
    std::vector<int64_t> out;
    for (const std::string& part : split_on(get_str(key), ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(std::stoll(p));
    }
    return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& part : split_on(get_str(key), ',')) {
        const std::string p = trim(part);
        if (p.empty()) continue;
        out.push_back(std::stod(p));
    }
    return out;
}

std::map<std::string, std::string> RunConfig::resolved() const { return values_; }

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
}

} // namespace kplug::cli
