#include "gcomp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "gcomp/error.hpp"
#include "gcomp/interpolation.hpp"

namespace gcomp {

bool is_experiment(std::string_view name) {
    return std::find(std::begin(kExperiments), std::end(kExperiments), name) != std::end(kExperiments);
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::InvalidValue, "field `" + field + "`: " + why);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Tracks which keys of a JSON object were consumed so leftovers can be
// reported as unknown.
class ObjectReader {
public:
    ObjectReader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
        if (!object_.is_object()) {
            invalid(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    // nullptr when the key is absent or explicitly null.
    const Json* get(const std::string& key) {
        seen_.insert(key);
        const auto it = object_.find(key);
        if (it == object_.end() || it->is_null()) {
            return nullptr;
        }
        return &*it;
    }

    std::string field(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& item : object_.items()) {
            if (!seen_.count(item.key())) {
                throw Error(ErrorCode::UnknownKey, "unknown key `" + join(path_, item.key()) + "`");
            }
        }
    }

private:
    const Json& object_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_real(const Json& v, const std::string& field) {
    if (!v.is_number()) {
        invalid(field, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        invalid(field, "must be finite");
    }
    return x;
}

std::int64_t as_int(const Json& v, const std::string& field) {
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            invalid(field, "integer out of range");
        }
        return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) {
        invalid(field, "expected an integer");
    }
    return v.get<std::int64_t>();
}

int as_dimension(const Json& v, const std::string& field) {
    const auto x = as_int(v, field);
    if (x < 1) {
        invalid(field, "dimension must be a positive integer, got " + std::to_string(x));
    }
    if (x > 1000000) {
        invalid(field, "dimension too large");
    }
    return static_cast<int>(x);
}

Vector as_vector(const Json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) {
        invalid(field, "expected a non-empty array of numbers");
    }
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = as_real(v[i], field + "[" + std::to_string(i) + "]");
    }
    return out;
}

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (const double x : v) {
        out.push_back(x);
    }
    return out;
}

Json canonical_norm(const Json& value, int dim, const std::string& field) {
    if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "l1") return Json{{"p", 1}, {"weights", nullptr}};
        if (s == "l2") return Json{{"p", 2}, {"weights", nullptr}};
        if (s == "linf") return Json{{"p", "inf"}, {"weights", nullptr}};
        invalid(field, "unknown norm `" + s + "` (expected l1, l2, linf or an object)");
    }
    ObjectReader r(value, field);
    Json out = Json::object();
    const Json* p = r.get("p");
    if (p == nullptr) {
        out["p"] = 2;
    } else if (p->is_string()) {
        if (p->get<std::string>() != "inf") {
            invalid(r.field("p"), "expected a number ≥ 1 or \"inf\"");
        }
        out["p"] = "inf";
    } else {
        const double pv = as_real(*p, r.field("p"));
        if (pv < 1.0) {
            invalid(r.field("p"), "exponent must be at least 1");
        }
        out["p"] = *p;
    }
    if (const Json* w = r.get("weights")) {
        const Vector weights = as_vector(*w, r.field("weights"));
        if (weights.size() != dim) {
            invalid(r.field("weights"), "expected " + std::to_string(dim) + " weights, got " +
                                            std::to_string(weights.size()));
        }
        if ((weights.array() <= 0.0).any()) {
            invalid(r.field("weights"), "weights must be positive");
        }
        out["weights"] = vector_json(weights);
    } else {
        out["weights"] = nullptr;
    }
    r.finish();
    return out;
}

NormSpec build_norm(const Json& canon, int dim) {
    const double p = canon["p"].is_string() ? kInfinity : canon["p"].get<double>();
    if (canon["weights"].is_null()) {
        return NormSpec::lp(p, dim);
    }
    Vector w(dim);
    for (int i = 0; i < dim; ++i) {
        w[i] = canon["weights"][static_cast<std::size_t>(i)].get<double>();
    }
    return NormSpec::weighted_lp(p, std::move(w));
}

Json default_function() { return Json{{"kind", "norm"}, {"norm", "l2"}}; }

Json canonical_function(const Json& value, int dim, const std::string& field) {
    ObjectReader r(value, field);
    const Json* kind_json = r.get("kind");
    if (kind_json == nullptr || !kind_json->is_string()) {
        invalid(r.field("kind"), "expected one of norm, negated_norm, linear, distance_to_point, centered_abs");
    }
    const auto kind = kind_json->get<std::string>();
    Json out = Json::object();
    out["kind"] = kind;
    if (kind == "norm" || kind == "negated_norm") {
        const Json* norm = r.get("norm");
        out["norm"] = canonical_norm(norm ? *norm : Json("l2"), dim, r.field("norm"));
        const Json* scale = r.get("scale");
        const double s = scale ? as_real(*scale, r.field("scale")) : 1.0;
        if (s <= 0.0) {
            invalid(r.field("scale"), "scale must be positive");
        }
        out["scale"] = s;
        const Json* lip = r.get("lipschitz");
        if (lip != nullptr) {
            if (kind != "norm") {
                invalid(r.field("lipschitz"), "only plain norms accept a target Lipschitz constant");
            }
            if (scale != nullptr) {
                invalid(r.field("lipschitz"), "give either scale or lipschitz, not both");
            }
            const double l = as_real(*lip, r.field("lipschitz"));
            if (l <= 0.0) {
                invalid(r.field("lipschitz"), "Lipschitz constant must be positive");
            }
            out["scale"] = nullptr;
            out["lipschitz"] = l;
        } else {
            out["lipschitz"] = nullptr;
        }
    } else if (kind == "linear" || kind == "distance_to_point") {
        const std::string key = kind == "linear" ? "a" : "center";
        const Json* v = r.get(key);
        if (v == nullptr) {
            invalid(r.field(key), "required");
        }
        const Vector vec = as_vector(*v, r.field(key));
        if (vec.size() != dim) {
            invalid(r.field(key), "expected length " + std::to_string(dim));
        }
        out[key] = vector_json(vec);
    } else if (kind == "centered_abs") {
        const Json* inner = r.get("inner");
        out["inner"] = canonical_function(inner ? *inner : default_function(), dim, r.field("inner"));
        const Json* mu = r.get("mu");
        if (mu == nullptr) {
            invalid(r.field("mu"), "required");
        }
        out["mu"] = as_real(*mu, r.field("mu"));
    } else {
        invalid(r.field("kind"), "unknown function kind `" + kind + "`");
    }
    r.finish();
    return out;
}

LipschitzFn build_function(const Json& canon, int dim) {
    const auto kind = canon["kind"].get<std::string>();
    if (kind == "norm") {
        NormSpec spec = build_norm(canon["norm"], dim);
        if (!canon["lipschitz"].is_null()) {
            return LipschitzFn::norm_with_constant(std::move(spec), canon["lipschitz"].get<double>());
        }
        return LipschitzFn::norm(std::move(spec), canon["scale"].get<double>());
    }
    if (kind == "negated_norm") {
        return LipschitzFn::negated_norm(build_norm(canon["norm"], dim), canon["scale"].get<double>());
    }
    if (kind == "linear") {
        return LipschitzFn::linear(as_vector(canon["a"], "a"));
    }
    if (kind == "distance_to_point") {
        return LipschitzFn::distance_to_point(as_vector(canon["center"], "center"));
    }
    return LipschitzFn::centered_abs(build_function(canon["inner"], dim), canon["mu"].get<double>());
}

Json canonical_points(const Json* value, const std::string& field) {
    if (value == nullptr) {
        invalid(field, "required");
    }
    if (!value->is_array() || value->empty()) {
        invalid(field, "expected a non-empty array of points");
    }
    Json out = Json::array();
    std::size_t n = 0;
    for (std::size_t i = 0; i < value->size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        const Vector p = as_vector((*value)[i], f);
        if (i == 0) {
            n = static_cast<std::size_t>(p.size());
        } else if (static_cast<std::size_t>(p.size()) != n) {
            invalid(f, "all points must have the same length");
        }
        out.push_back(vector_json(p));
    }
    return out;
}

Json canonical_matrix(const Json& value, const std::string& field) {
    if (!value.is_array() || value.empty()) {
        invalid(field, "expected a non-empty array of rows");
    }
    Json out = Json::array();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        const Vector row = as_vector(value[i], f);
        if (i == 0) {
            cols = static_cast<std::size_t>(row.size());
        } else if (static_cast<std::size_t>(row.size()) != cols) {
            invalid(f, "ragged matrix");
        }
        out.push_back(vector_json(row));
    }
    return out;
}

Json canonical_family(const Json& value, const std::string& field) {
    ObjectReader r(value, field);
    Json out = Json::object();
    const Json* vd = r.get("value_dim");
    out["value_dim"] = vd ? as_dimension(*vd, r.field("value_dim")) : 1;
    const Json* kernel = r.get("kernel");
    const Json* blocks = r.get("blocks");
    if ((kernel == nullptr) == (blocks == nullptr)) {
        invalid(field, "give exactly one of `kernel` or `blocks`");
    }
    out["kernel"] = kernel ? canonical_matrix(*kernel, r.field("kernel")) : Json(nullptr);
    out["blocks"] = blocks ? canonical_matrix(*blocks, r.field("blocks")) : Json(nullptr);
    if (const Json* labels = r.get("labels")) {
        if (!labels->is_array()) {
            invalid(r.field("labels"), "expected an array of strings");
        }
        for (const auto& l : *labels) {
            if (!l.is_string()) {
                invalid(r.field("labels"), "expected an array of strings");
            }
        }
        out["labels"] = *labels;
    } else {
        out["labels"] = nullptr;
    }
    r.finish();
    return out;
}

Json canonical_functions(const Json* value, int dim, const std::string& field) {
    Json out = Json::array();
    if (value == nullptr) {
        out.push_back(canonical_function(default_function(), dim, field + "[0]"));
    } else if (value->is_object()) {
        out.push_back(canonical_function(*value, dim, field + "[0]"));
    } else if (value->is_array() && !value->empty()) {
        for (std::size_t i = 0; i < value->size(); ++i) {
            out.push_back(canonical_function((*value)[i], dim, field + "[" + std::to_string(i) + "]"));
        }
    } else {
        invalid(field, "expected a function object or a non-empty array of them");
    }
    return out;
}

void check_function_count(const Json& functions, const Json& points, const std::string& field) {
    if (functions.size() != 1 && functions.size() != points.size()) {
        invalid(field, "expected one function or one per point (" + std::to_string(points.size()) + ")");
    }
}

int required_dim(ObjectReader& r, const std::string& key) {
    const Json* v = r.get(key);
    if (v == nullptr) {
        invalid(r.field(key), "required");
    }
    return as_dimension(*v, r.field(key));
}

Json settings_for(const std::string& experiment, ObjectReader& r) {
    Json s = Json::object();
    if (experiment == "theorem1" || experiment == "h_curve") {
        s["points"] = canonical_points(r.get("points"), "points");
        s["d"] = required_dim(r, "d");
        s["functions"] = canonical_functions(r.get("functions"), s["d"].get<int>(), "functions");
        check_function_count(s["functions"], s["points"], "functions");
        if (experiment == "h_curve") {
            const Json* beta = r.get("beta");
            const double b = beta ? as_real(*beta, "beta") : 20.0;
            if (b <= 0.0) {
                invalid("beta", "must be positive");
            }
            s["beta"] = b;
            const Json* gp = r.get("grid_points");
            const Json* grid = r.get("theta_grid");
            std::vector<double> theta;
            if (grid != nullptr) {
                const Vector g = as_vector(*grid, "theta_grid");
                theta.assign(g.begin(), g.end());
                if (theta.size() < 2) {
                    invalid("theta_grid", "needs at least two points");
                }
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    if (theta[i] < 0.0 || theta[i] > std::numbers::pi / 2 + 1e-12 || (i > 0 && theta[i] <= theta[i - 1])) {
                        invalid("theta_grid", "must increase within [0, pi/2]");
                    }
                }
                if (gp != nullptr && as_int(*gp, "grid_points") != static_cast<std::int64_t>(theta.size())) {
                    invalid("grid_points", "disagrees with the length of theta_grid");
                }
            } else {
                const int k = gp ? static_cast<int>(as_int(*gp, "grid_points")) : 9;
                if (k < 2 || k > 100000) {
                    invalid("grid_points", "must lie in [2, 100000]");
                }
                theta = uniform_theta_grid(k);
            }
            s["grid_points"] = theta.size();
            s["theta_grid"] = theta;
            const Json* csv = r.get("csv");
            if (csv != nullptr && !csv->is_string()) {
                invalid("csv", "expected a path string");
            }
            s["csv"] = csv ? *csv : Json("");
        }
    } else if (experiment == "corollary1") {
        s["points"] = canonical_points(r.get("points"), "points");
        s["d"] = required_dim(r, "d");
        const Json* norm = r.get("norm");
        s["norm"] = canonical_norm(norm ? *norm : Json("l2"), s["d"].get<int>(), "norm");
    } else if (experiment == "corollary2") {
        s["points"] = canonical_points(r.get("points"), "points");
        s["d"] = required_dim(r, "d");
        const Json* f = r.get("function");
        s["function"] = canonical_function(f ? *f : default_function(), s["d"].get<int>(), "function");
    } else if (experiment == "poincare") {
        s["d"] = required_dim(r, "d");
        const Json* f = r.get("function");
        s["function"] = canonical_function(f ? *f : default_function(), s["d"].get<int>(), "function");
        const Json* g = r.get("gradient");
        const std::string mode = g ? (g->is_string() ? g->get<std::string>() : "") : "analytic";
        if (mode != "analytic" && mode != "finite_difference") {
            invalid("gradient", "expected analytic or finite_difference");
        }
        s["gradient"] = mode;
    } else if (experiment == "slepian_check") {
        const Json* points = r.get("points");
        const Json* families = r.get("families");
        if ((points == nullptr) == (families == nullptr)) {
            invalid("points", "give exactly one of `points` or `families`");
        }
        if (points != nullptr) {
            s["points"] = canonical_points(points, "points");
            const Json* d = r.get("d");
            s["d"] = d ? as_dimension(*d, "d") : 1;
            s["families"] = nullptr;
        } else {
            s["points"] = nullptr;
            if (r.get("d") != nullptr) {
                invalid("d", "only used together with `points`");
            }
            s["d"] = nullptr;
            ObjectReader fr(*families, "families");
            Json fams = Json::object();
            for (const char* key : {"X", "Y", "G"}) {
                const Json* f = fr.get(key);
                if (f == nullptr) {
                    invalid(fr.field(key), "required");
                }
                fams[key] = canonical_family(*f, fr.field(key));
            }
            fr.finish();
            s["families"] = fams;
        }
    } else if (experiment == "gordon_chevet") {
        const Json* vm = r.get("v_matrix");
        const Json* um = r.get("u_matrix");
        const Json* n = r.get("n");
        const Json* d = r.get("d");
        Json v = vm ? canonical_matrix(*vm, "v_matrix") : Json(nullptr);
        Json u = um ? canonical_matrix(*um, "u_matrix") : Json(nullptr);
        int nv = 0;
        int dv = 0;
        if (vm != nullptr) {
            nv = static_cast<int>(v.size());
            if (n != nullptr && as_dimension(*n, "n") != nv) {
                invalid("n", "disagrees with the row count of v_matrix");
            }
        } else {
            if (n == nullptr) {
                invalid("n", "required when v_matrix is absent");
            }
            nv = as_dimension(*n, "n");
        }
        if (um != nullptr) {
            dv = static_cast<int>(u[0].size());
            if (d != nullptr && as_dimension(*d, "d") != dv) {
                invalid("d", "disagrees with the column count of u_matrix");
            }
        } else {
            if (d == nullptr) {
                invalid("d", "required when u_matrix is absent");
            }
            dv = as_dimension(*d, "d");
        }
        const int m = vm ? static_cast<int>(v[0].size()) : nv;
        const int big_d = um ? static_cast<int>(u.size()) : dv;
        s["n"] = nv;
        s["d"] = dv;
        s["v_matrix"] = v;
        s["u_matrix"] = u;
        const Json* dn = r.get("domain_norm");
        const Json* rn = r.get("range_norm");
        s["domain_norm"] = canonical_norm(dn ? *dn : Json("l2"), m, "domain_norm");
        s["range_norm"] = canonical_norm(rn ? *rn : Json("l2"), big_d, "range_norm");
    } else if (experiment == "dvoretzky") {
        s["N"] = required_dim(r, "N");
        const Json* eps = r.get("epsilon");
        if (eps == nullptr) {
            invalid("epsilon", "required");
        }
        const double e = as_real(*eps, "epsilon");
        if (e <= 0.0) {
            invalid("epsilon", "must be positive");
        }
        s["epsilon"] = e;
        const Json* f = r.get("function");
        s["function"] = canonical_function(f ? *f : default_function(), s["N"].get<int>(), "function");
        const Json* ma = r.get("max_attempts");
        const auto attempts = ma ? as_int(*ma, "max_attempts") : 50;
        if (attempts < 1 || attempts > 100000) {
            invalid("max_attempts", "must lie in [1, 100000]");
        }
        s["max_attempts"] = attempts;
        const Json* ss = r.get("sphere_samples");
        const auto sphere = ss ? as_int(*ss, "sphere_samples") : 10000;
        if (sphere < 1 || sphere > 100000000) {
            invalid("sphere_samples", "must lie in [1, 1e8]");
        }
        s["sphere_samples"] = sphere;
        const Json* csv = r.get("csv");
        if (csv != nullptr && !csv->is_string()) {
            invalid("csv", "expected a path string");
        }
        s["csv"] = csv ? *csv : Json("");
    }
    return s;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    // nlohmann reports the position one past the offending character.
    return {line, std::max(1, column - 1)};
}

}  // namespace

Json ExperimentConfig::echo() const {
    Json out = Json::object();
    out["experiment"] = experiment;
    out["seed"] = seed;
    out["samples"] = samples;
    out["confidence"] = confidence;
    for (const auto& item : settings.items()) {
        out[item.key()] = item.value();
    }
    return out;
}

ExperimentConfig parse_config_text(std::string_view text, std::string_view experiment) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                               ": " + e.what());
    }
    ObjectReader r(root, "");
    ExperimentConfig cfg;
    const Json* name = r.get("experiment");
    if (name != nullptr) {
        if (!name->is_string() || !is_experiment(name->get<std::string>())) {
            invalid("experiment", "unknown experiment");
        }
        cfg.experiment = name->get<std::string>();
        if (!experiment.empty() && cfg.experiment != experiment) {
            invalid("experiment", "config names `" + cfg.experiment + "` but `" + std::string(experiment) +
                                      "` was requested");
        }
    } else {
        if (experiment.empty()) {
            invalid("experiment", "required");
        }
        if (!is_experiment(experiment)) {
            invalid("experiment", "unknown experiment `" + std::string(experiment) + "`");
        }
        cfg.experiment = std::string(experiment);
    }
    if (const Json* seed = r.get("seed")) {
        if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<std::int64_t>() >= 0)) {
            invalid("seed", "expected an unsigned 64-bit integer");
        }
        cfg.seed = seed->get<std::uint64_t>();
    }
    if (const Json* samples = r.get("samples")) {
        const auto s = as_int(*samples, "samples");
        if (s < 2) {
            invalid("samples", "need at least 2 samples");
        }
        cfg.samples = static_cast<std::uint64_t>(s);
    }
    if (const Json* conf = r.get("confidence")) {
        cfg.confidence = as_real(*conf, "confidence");
        if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
            invalid("confidence", "must lie strictly between 0 and 1");
        }
    }
    cfg.settings = settings_for(cfg.experiment, r);
    r.finish();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path, std::string_view experiment) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::ParseError, "cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), experiment);
}

NormSpec decode_norm(const Json& value, int dim, const std::string& field) {
    return build_norm(canonical_norm(value, dim, field), dim);
}

LipschitzFn decode_function(const Json& value, int dim, const std::string& field) {
    return build_function(canonical_function(value, dim, field), dim);
}

std::vector<Vector> decode_points(const Json& value, const std::string& field) {
    const Json canon = canonical_points(&value, field);
    std::vector<Vector> out;
    out.reserve(canon.size());
    for (const auto& p : canon) {
        out.push_back(as_vector(p, field));
    }
    return out;
}

Matrix decode_matrix(const Json& value, const std::string& field) {
    const Json canon = canonical_matrix(value, field);
    Matrix out(static_cast<Eigen::Index>(canon.size()), static_cast<Eigen::Index>(canon[0].size()));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        out.row(i) = as_vector(canon[static_cast<std::size_t>(i)], field).transpose();
    }
    return out;
}

IndexedGaussianFamily decode_family(const Json& value, const std::string& field) {
    const Json canon = canonical_family(value, field);
    const int d = canon["value_dim"].get<int>();
    std::vector<std::string> labels;
    if (!canon["labels"].is_null()) {
        labels = canon["labels"].get<std::vector<std::string>>();
    }
    if (!canon["kernel"].is_null()) {
        return IndexedGaussianFamily::from_kernel(decode_matrix(canon["kernel"], field + ".kernel"), d, labels);
    }
    return IndexedGaussianFamily::from_blocks(decode_matrix(canon["blocks"], field + ".blocks"), d, labels);
}

}  // namespace gcomp
