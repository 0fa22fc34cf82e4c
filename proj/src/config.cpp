#include "sparse_rls/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    const auto body = text::trim(text);
    return !body.empty() && body.front() == '{';
}

/// Key lookup over one section with typed accessors and leftover detection.
class SectionReader {
public:
    SectionReader(const ConfigSection& sec, std::string prefix)
        : sec_(sec), prefix_(std::move(prefix)) {
        std::set<std::string> seen;
        for (const auto& [k, v] : sec.entries)
            if (!seen.insert(k).second) throw ConfigError(field(k), "duplicate key");
    }

    bool has(const std::string& key) const { return find(key) != nullptr; }

    std::optional<double> real(const std::string& key) {
        const auto* raw = take(key);
        if (!raw) return std::nullopt;
        const auto v = text::parse_double(*raw);
        if (!v) throw ConfigError(field(key), "expected a number, got '" + *raw + "'");
        return v;
    }

    std::optional<unsigned long long> count(const std::string& key) {
        const auto* raw = take(key);
        if (!raw) return std::nullopt;
        const auto v = text::parse_uint(*raw);
        if (!v) throw ConfigError(field(key), "expected a nonnegative integer, got '" + *raw + "'");
        return v;
    }

    std::optional<std::string> word(const std::string& key) {
        const auto* raw = take(key);
        if (!raw) return std::nullopt;
        return *raw;
    }

    template <class T>
    T required(std::optional<T> v, const std::string& key) const {
        if (!v) throw ConfigError(field(key), "missing required field");
        return *v;
    }

    void reject_leftovers() const {
        for (const auto& [k, v] : sec_.entries)
            if (!used_.count(k)) throw ConfigError(field(k), "unknown or inapplicable key");
    }

    std::string field(const std::string& key) const { return prefix_ + "." + key; }

private:
    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : sec_.entries)
            if (k == key) return &v;
        return nullptr;
    }
    const std::string* take(const std::string& key) {
        const auto* v = find(key);
        if (v) used_.insert(key);
        return v;
    }

    const ConfigSection& sec_;
    std::string prefix_;
    std::set<std::string> used_;
};

void check_id(const ConfigSection& sec) {
    const auto& id = sec.label;
    if (id.empty()) throw ConfigError("algorithm", "section on line " + std::to_string(sec.line) + " needs an id");
    for (char c : id)
        if (c == ',' || c == '"' || c == ' ' || c == '\t')
            throw ConfigError("algorithm", "id '" + id + "' must not contain commas, quotes or spaces");
}

AlgorithmConfig build_algorithm(const ConfigSection& sec) {
    check_id(sec);
    SectionReader r(sec, "algorithm." + sec.label);
    AlgorithmConfig a;
    a.id = sec.label;

    const auto kind_name = r.required(r.word("kind"), "kind");
    const auto kind = parse_algorithm_kind(kind_name);
    if (!kind) throw ConfigError(r.field("kind"), "unknown algorithm kind '" + kind_name + "' (rls, cr-rls, em)");
    a.kind = *kind;

    switch (a.kind) {
        case AlgorithmKind::Rls:
            a.rho = r.real("rho");
            break;
        case AlgorithmKind::CrRls: {
            a.rho = r.real("rho");
            a.gamma = r.required(r.real("gamma"), "gamma");
            const auto pen = r.required(r.word("penalty"), "penalty");
            if (pen == "l1") {
                a.penalty = L1{};
            } else if (pen == "l0") {
                a.penalty = L0Approx{r.real("beta").value_or(kDefaultBeta)};
            } else {
                throw ConfigError(r.field("penalty"), "expected l1 or l0, got '" + pen + "'");
            }
            break;
        }
        case AlgorithmKind::EmRls: {
            a.p = r.required(r.real("p"), "p");
            a.gamma = r.required(r.real("gamma"), "gamma");
            a.alpha_over_sigma = r.real("alpha_over_sigma").value_or(kDefaultAlphaOverSigma);
            a.beta = r.real("beta").value_or(kDefaultBeta);
            a.delta = r.real("delta").value_or(kDefaultDelta);
            a.k_iters = static_cast<int>(r.count("k_iters").value_or(1));
            const auto mode = r.word("e_step").value_or("support");
            if (mode == "support")
                a.e_step = EStepMode::SupportRestricted;
            else if (mode == "dense")
                a.e_step = EStepMode::Dense;
            else
                throw ConfigError(r.field("e_step"), "expected support or dense, got '" + mode + "'");
            break;
        }
    }
    r.reject_leftovers();
    return a;
}

void validate_or_throw(const ExperimentConfig& cfg) {
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", e.what());
    }
}

ExperimentConfig build_experiment(const std::vector<ConfigSection>& sections) {
    const ConfigSection* exp = nullptr;
    ExperimentConfig cfg;
    for (const auto& sec : sections) {
        if (sec.name == "experiment") {
            if (exp) throw ConfigError("experiment", "section appears twice");
            exp = &sec;
        } else if (sec.name == "algorithm") {
            cfg.algorithms.push_back(build_algorithm(sec));
        } else {
            throw ConfigError(sec.name, "unknown section");
        }
    }
    if (!exp) throw ConfigError("experiment", "missing [experiment] section");

    SectionReader r(*exp, "experiment");
    cfg.m = r.required(r.count("m"), "m");
    cfg.r_true = r.required(r.count("r_true"), "r_true");
    cfg.noise_variance = r.required(r.real("noise_variance"), "noise_variance");
    cfg.lambda = r.required(r.real("lambda"), "lambda");
    cfg.input_variance = r.real("input_variance");
    cfg.n_iters = r.count("n_iters").value_or(2000);
    cfg.n_trials = r.count("n_trials").value_or(20);
    cfg.seed = r.count("seed").value_or(0);
    if (const auto t = r.count("threads")) cfg.threads = static_cast<unsigned>(*t);
    r.reject_leftovers();

    if (cfg.algorithms.empty()) throw ConfigError("algorithm", "no [algorithm <id>] sections");
    validate_or_throw(cfg);
    return cfg;
}

std::string json_scalar(const nlohmann::json& v, const std::string& field) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return text::format_double(v.get<double>());
    throw ConfigError(field, "expected a scalar value");
}

ConfigSection json_section(const nlohmann::json& obj, std::string name, std::string label,
                           const std::string& field, std::initializer_list<std::string> skip = {}) {
    if (!obj.is_object()) throw ConfigError(field, "expected an object");
    ConfigSection sec{std::move(name), std::move(label), 0, {}};
    for (const auto& [k, v] : obj.items()) {
        if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
        sec.entries.emplace_back(k, json_scalar(v, field + "." + k));
    }
    return sec;
}

}  // namespace

std::vector<ConfigSection> parse_config_sections(const std::string& content) {
    std::vector<ConfigSection> sections;
    std::istringstream in(content);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = std::string_view(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where, "unterminated section header");
            const auto inner = text::trim(line.substr(1, line.size() - 2));
            const auto space = inner.find_first_of(" \t");
            ConfigSection sec;
            sec.line = lineno;
            sec.name = std::string(inner.substr(0, space));
            if (space != std::string_view::npos) sec.label = std::string(text::trim(inner.substr(space)));
            sections.push_back(std::move(sec));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
        if (sections.empty()) throw ConfigError(where, "key outside of any section");
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where, "empty key");
        sections.back().entries.emplace_back(std::string(key), std::string(value));
    }
    return sections;
}

ExperimentConfig parse_experiment_config(const std::string& content) {
    if (looks_like_json(content)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(content);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("", std::string("invalid JSON: ") + e.what());
        }
        return experiment_from_json(j);
    }
    return build_experiment(parse_config_sections(content));
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_file(path));
}

IdentifyConfig parse_identify_config(const std::string& content) {
    const auto sections = parse_config_sections(content);
    IdentifyConfig out;
    const ConfigSection* exp = nullptr;
    const ConfigSection* algo = nullptr;
    for (const auto& sec : sections) {
        if (sec.name == "experiment") {
            if (exp) throw ConfigError("experiment", "section appears twice");
            exp = &sec;
        } else if (sec.name == "algorithm") {
            if (algo) throw ConfigError("algorithm", "identify takes exactly one algorithm");
            algo = &sec;
        } else {
            throw ConfigError(sec.name, "unknown section");
        }
    }
    if (!exp) throw ConfigError("experiment", "missing [experiment] section");
    if (!algo) throw ConfigError("algorithm", "missing [algorithm <id>] section");

    SectionReader r(*exp, "experiment");
    out.lambda = r.required(r.real("lambda"), "lambda");
    out.noise_variance = r.required(r.real("noise_variance"), "noise_variance");
    r.reject_leftovers();
    if (!(out.lambda > 0.0 && out.lambda <= 1.0))
        throw ConfigError("experiment.lambda", "must lie in (0, 1]");
    if (!(out.noise_variance >= 0.0)) throw ConfigError("experiment.noise_variance", "must be nonnegative");
    out.algorithm = build_algorithm(*algo);
    return out;
}

IdentifyConfig load_identify_config(const std::filesystem::path& path) {
    return parse_identify_config(read_file(path));
}

nlohmann::json to_json(const AlgorithmConfig& a) {
    nlohmann::json j;
    j["id"] = a.id;
    j["kind"] = std::string(to_string(a.kind));
    switch (a.kind) {
        case AlgorithmKind::Rls:
            if (a.rho) j["rho"] = *a.rho;
            break;
        case AlgorithmKind::CrRls:
            if (a.rho) j["rho"] = *a.rho;
            j["gamma"] = a.gamma;
            if (const auto* l0 = std::get_if<L0Approx>(&a.penalty)) {
                j["penalty"] = "l0";
                j["beta"] = l0->beta;
            } else {
                j["penalty"] = "l1";
            }
            break;
        case AlgorithmKind::EmRls:
            j["p"] = a.p;
            j["gamma"] = a.gamma;
            j["alpha_over_sigma"] = a.alpha_over_sigma;
            j["beta"] = a.beta;
            j["delta"] = a.delta;
            j["k_iters"] = a.k_iters;
            j["e_step"] = a.e_step == EStepMode::Dense ? "dense" : "support";
            break;
    }
    return j;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json exp;
    exp["m"] = cfg.m;
    exp["r_true"] = cfg.r_true;
    exp["noise_variance"] = cfg.noise_variance;
    if (cfg.input_variance) exp["input_variance"] = *cfg.input_variance;
    exp["lambda"] = cfg.lambda;
    exp["n_iters"] = cfg.n_iters;
    exp["n_trials"] = cfg.n_trials;
    exp["seed"] = cfg.seed;
    if (cfg.threads) exp["threads"] = *cfg.threads;

    nlohmann::json algos = nlohmann::json::array();
    for (const auto& a : cfg.algorithms) algos.push_back(to_json(a));
    return {{"experiment", exp}, {"algorithms", algos}};
}

ExperimentConfig experiment_from_json(const nlohmann::json& j_in) {
    // a run manifest wraps the snapshot under "config"
    const nlohmann::json& j = j_in.contains("config") ? j_in.at("config") : j_in;
    if (!j.is_object() || !j.contains("experiment"))
        throw ConfigError("experiment", "missing experiment object");

    std::vector<ConfigSection> sections;
    sections.push_back(json_section(j.at("experiment"), "experiment", "", "experiment"));
    if (j.contains("algorithms")) {
        const auto& algos = j.at("algorithms");
        if (!algos.is_array()) throw ConfigError("algorithms", "expected an array");
        for (const auto& a : algos) {
            if (!a.is_object() || !a.contains("id") || !a.at("id").is_string())
                throw ConfigError("algorithms", "each algorithm needs a string id");
            const auto id = a.at("id").get<std::string>();
            sections.push_back(json_section(a, "algorithm", id, "algorithm." + id, {"id"}));
        }
    }
    return build_experiment(sections);
}

}  // namespace sparse_rls
