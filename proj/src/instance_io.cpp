#include "qapprox/instance_io.hpp"

#include <cmath>
#include <complex>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qapprox {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what, path);
}

void require_object(const Json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
}

void reject_unknown(const Json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (std::string_view key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path + "." + item.key(), "unknown field");
    }
}

double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::complex<double> as_complex(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) fail(path, "expected a [re, im] pair");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

BlochVector as_vec3(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an [x, y, z] triple");
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"),
            as_number(v[2], path + "[2]")};
}

TargetState parse_target(const Json& t, double tol) {
    require_object(t, "target");
    reject_unknown(t, "target", {"matrix", "bloch", "params"});
    const int present = static_cast<int>(t.contains("matrix")) +
                        static_cast<int>(t.contains("bloch")) +
                        static_cast<int>(t.contains("params"));
    if (present != 1)
        fail("target", "exactly one of matrix, bloch or params must be present");

    if (t.contains("matrix")) {
        const Json& m = t["matrix"];
        if (!m.is_array() || m.size() != 2) fail("target.matrix", "expected two rows");
        Eigen::Matrix2cd rho;
        for (int r = 0; r < 2; ++r) {
            const std::string row_path = "target.matrix[" + std::to_string(r) + "]";
            const Json& row = m[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != 2) fail(row_path, "expected two entries");
            for (int c = 0; c < 2; ++c)
                rho(r, c) = as_complex(row[static_cast<std::size_t>(c)],
                                       row_path + "[" + std::to_string(c) + "]");
        }
        return validate_density(rho, tol);
    }
    if (t.contains("bloch")) return target_from_bloch(as_vec3(t["bloch"], "target.bloch"), tol);

    const Json& p = t["params"];
    require_object(p, "target.params");
    reject_unknown(p, "target.params", {"a", "k", "phi"});
    for (const char* key : {"a", "k", "phi"})
        if (!p.contains(key)) fail(std::string("target.params.") + key, "missing required field");
    return target_from_params(as_number(p["a"], "target.params.a"),
                              as_number(p["k"], "target.params.k"),
                              as_number(p["phi"], "target.params.phi"));
}

PureState parse_set_state(const Json& e, const std::string& path) {
    require_object(e, path);
    reject_unknown(e, path, {"amplitudes", "bloch"});
    const bool has_amp = e.contains("amplitudes");
    const bool has_bloch = e.contains("bloch");
    if (has_amp == has_bloch)
        fail(path, "exactly one of amplitudes or bloch must be present");

    if (has_amp) {
        const Json& a = e["amplitudes"];
        if (!a.is_array() || a.size() != 2)
            fail(path + ".amplitudes", "expected two [re, im] pairs");
        Eigen::Vector2cd amps;
        amps << as_complex(a[0], path + ".amplitudes[0]"),
            as_complex(a[1], path + ".amplitudes[1]");
        return bloch_of_pure(amps);
    }
    return pure_from_bloch(as_vec3(e["bloch"], path + ".bloch"));
}

SolveOptions parse_options(const Json& doc, const ParseOverrides& overrides) {
    SolveOptions options;
    if (doc.contains("options")) {
        const Json& o = doc["options"];
        require_object(o, "options");
        reject_unknown(o, "options", {"tol", "step"});
        if (o.contains("tol")) {
            options.tol = as_number(o["tol"], "options.tol");
            if (!(options.tol > 0.0)) fail("options.tol", "must be positive");
        }
        if (o.contains("step")) {
            options.oracle_step = as_number(o["step"], "options.step");
            if (!(options.oracle_step > 0.0 && options.oracle_step <= 0.5))
                fail("options.step", "must lie in (0, 0.5]");
        }
    }
    if (overrides.tol) {
        if (!(*overrides.tol > 0.0)) fail("--tol", "must be positive");
        options.tol = *overrides.tol;
    }
    if (overrides.step) {
        if (!(*overrides.step > 0.0 && *overrides.step <= 0.5))
            fail("--step", "must lie in (0, 0.5]");
        options.oracle_step = *overrides.step;
    }
    return options;
}

/// Deterministic generator backing random_instance_document. Box-Muller on
/// top of mt19937_64 keeps the byte stream identical across platforms
/// (std::normal_distribution is implementation-defined).
class DocRng {
public:
    explicit DocRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

Instance parse_instance(const std::string& text, const ParseOverrides& overrides) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what(), "$");
    }
    return parse_instance(doc, overrides);
}

Instance parse_instance(const Json& doc, const ParseOverrides& overrides) {
    require_object(doc, "$");
    reject_unknown(doc, "$", {"target", "set", "options"});
    for (const char* key : {"target", "set"})
        if (!doc.contains(key)) fail(key, "missing required field");

    Instance instance;
    instance.options = parse_options(doc, overrides);
    instance.target = parse_target(doc["target"], instance.options.tol);

    const Json& set = doc["set"];
    if (!set.is_array()) fail("set", "expected an array of states");
    if (set.empty()) fail("set", "must be nonempty");
    instance.set.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        instance.set.push_back(parse_set_state(set[i], "set[" + std::to_string(i) + "]"));
    return instance;
}

Json result_document(const PlannerReport& report) {
    const SolveResult& r = report.result;
    Json doc;
    doc["distance"] = r.distance;
    doc["fidelity"] = r.fidelity;
    doc["weights"] = r.weights;
    doc["support"] = r.support;
    doc["branch"] = std::string(to_string(r.branch));
    doc["kkt_residual"] = r.kkt_residual ? Json(*r.kkt_residual) : Json(nullptr);
    doc["candidates_evaluated"] = report.candidates_evaluated;
    return doc;
}

Json verify_document(const VerifyReport& report) {
    Json doc;
    doc["closed"] = report.closed;
    doc["grid"] = report.grid;
    doc["gap"] = report.gap;
    doc["evaluations"] = report.evaluations;
    return doc;
}

Json random_instance_document(std::uint64_t seed, int n) {
    if (n < 1) throw ParamOutOfRange("a random instance needs at least one state");
    DocRng rng(seed);

    Json target;
    target["params"] = Json{{"a", rng.uniform()},
                            {"k", rng.uniform()},
                            {"phi", rng.uniform() * 2.0 * M_PI}};

    Json set = Json::array();
    for (int i = 0; i < n; ++i) {
        Eigen::Vector2cd v;
        do {
            v << std::complex<double>(rng.gaussian(), rng.gaussian()),
                std::complex<double>(rng.gaussian(), rng.gaussian());
        } while (v.norm() < 1e-6);
        v.normalize();
        Json entry;
        entry["amplitudes"] = Json::array(
            {Json::array({v(0).real(), v(0).imag()}), Json::array({v(1).real(), v(1).imag()})});
        set.push_back(std::move(entry));
    }

    Json doc;
    doc["target"] = std::move(target);
    doc["set"] = std::move(set);
    return doc;
}

}  // namespace qapprox
