#include "depgeo/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace depgeo::io {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("expected a number array");
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InvalidInput("expected a number array");
        v[i] = j[i].get<double>();
    }
    return v;
}

json vec_to_json(const Vec& v) {
    json j = json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("expected a matrix (array of rows)");
    const size_t rows = j.size();
    const size_t cols = j[0].size();
    Mat M(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw InvalidInput("matrix rows have mixed lengths");
        for (size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
    }
    return M;
}

json mat_to_json(const Mat& M) {
    json j = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        j.push_back(row);
    }
    return j;
}

}  // namespace

OneParamGroup group_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("group spec must be an object");
    if (!j.contains("drift")) throw InvalidInput("group spec needs a drift vector");
    Vec drift = vec_from_json(j.at("drift"));
    std::vector<double> rates;
    if (j.contains("rates"))
        for (const auto& r : j.at("rates")) rates.push_back(r.get<double>());

    Motion k = Motion::identity(static_cast<int>(drift.size()));
    if (j.contains("conjugator") && !j.at("conjugator").is_null()) {
        const json& c = j.at("conjugator");
        k = Motion(mat_from_json(c.at("Q")), vec_from_json(c.at("t")));
    }
    return OneParamGroup(std::move(k), std::move(rates), std::move(drift));
}

json group_to_json(const OneParamGroup& g) {
    json j;
    j["rates"] = g.rates();
    j["drift"] = vec_to_json(g.drift());
    j["conjugator"] = {{"Q", mat_to_json(g.conjugator().Q())},
                       {"t", vec_to_json(g.conjugator().t())}};
    return j;
}

ProductMap product_map_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("product map spec must be an object");
    for (const char* key : {"z", "phi", "psi"})
        if (!j.contains(key))
            throw InvalidInput(std::string("product map spec needs '") + key + "'");
    Vec z = vec_from_json(j.at("z"));
    if (j.contains("dim") && j.at("dim").get<int>() != static_cast<int>(z.size()))
        throw InvalidInput("product map spec: dim does not match z");
    OneParamGroup phi = group_from_json(j.at("phi"));
    OneParamGroup psi = group_from_json(j.at("psi"));
    return ProductMap(std::move(phi), std::move(psi), std::move(z));
}

json product_map_to_json(const ProductMap& pm) {
    json j;
    j["dim"] = pm.dim();
    j["z"] = vec_to_json(pm.z());
    j["phi"] = group_to_json(pm.phi());
    j["psi"] = group_to_json(pm.psi());
    return j;
}

ChordCoeffs coeffs_from_json(const json& j) {
    if (!j.is_object() || !j.contains("lambda"))
        throw InvalidInput("coefficient spec needs 'lambda'");
    std::vector<ChordTerm> terms;
    if (j.contains("terms"))
        for (const auto& t : j.at("terms"))
            terms.push_back({t.at("kappa").get<double>(), t.at("weight").get<double>()});
    return ChordCoeffs(j.at("lambda").get<double>(), std::move(terms));
}

json coeffs_to_json(const ChordCoeffs& c) {
    json j;
    j["lambda"] = c.lambda();
    j["terms"] = json::array();
    for (const auto& t : c.terms())
        j["terms"].push_back({{"kappa", t.kappa}, {"weight", t.weight}});
    return j;
}

SampledMonoidMap sampled_map_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("sampled map spec must be an object");
    for (const char* key : {"dim_domain", "dim_range", "points"})
        if (!j.contains(key))
            throw InvalidInput(std::string("sampled map spec needs '") + key + "'");
    const int m = j.at("dim_domain").get<int>();
    const int n = j.at("dim_range").get<int>();
    std::vector<Vec> points, images;
    for (const auto& p : j.at("points")) {
        Vec x = vec_from_json(p.at("x"));
        Vec hx = vec_from_json(p.at("hx"));
        if (static_cast<int>(x.size()) != m || static_cast<int>(hx.size()) != n)
            throw InvalidInput("sampled map point of wrong dimension");
        points.push_back(std::move(x));
        images.push_back(std::move(hx));
    }
    return SampledMonoidMap::from_vectors(points, images);
}

json sampled_map_to_json(const SampledMonoidMap& map) {
    if (!map.has_domain_points())
        throw InvalidInput("sampled_map_to_json: abstract carrier has no points");
    json j;
    j["dim_domain"] = static_cast<int>(map.domain_points()[0].size());
    j["dim_range"] = map.range_dim();
    j["points"] = json::array();
    for (int i = 0; i < map.size(); ++i)
        j["points"].push_back({{"x", vec_to_json(map.domain_points()[i])},
                               {"hx", vec_to_json(map.image(i))}});
    return j;
}

namespace {

json quadruple_to_json(const DepQuadruple& q) {
    json j;
    j["x"] = {q.x[0], q.x[1]};
    j["y"] = {q.y[0], q.y[1]};
    j["z"] = {q.z[0], q.z[1]};
    j["w"] = {q.w[0], q.w[1]};
    j["domain_distance"] = q.domain_distance;
    j["image_gap"] = q.image_gap;
    return j;
}

}  // namespace

json verdict_to_json(const DepVerdict& v) {
    json j;
    j["verdict"] = v.pass ? "pass" : "counterexample";
    j["trials"] = v.trials;
    j["tol"] = v.tol;
    j["seed"] = v.seed;
    if (v.counterexample) j["witness"] = quadruple_to_json(*v.counterexample);
    return j;
}

json certificate_to_json(const TheoremCertificate& c) {
    json j;
    json profiles = json::array();
    for (const auto& p : c.profiles) {
        json pj;
        pj["gamma"] = p.gamma;
        pj["lambda"] = p.lambda();
        pj["kappa_set"] = p.kappa_set;
        pj["coeffs"] = coeffs_to_json(p.coeffs);
        profiles.push_back(pj);
    }
    j["profiles"] = profiles;
    if (c.is_similarity()) {
        const auto& sc = std::get<SimilarityCertificate>(c.result);
        j["certificate"] = "similarity";
        j["sigma"] = sc.sigma;
        j["constant_map"] = sc.constant_map;
        j["lambda_spread"] = sc.lambda_spread;
        j["checked_sigma"] = sc.checked_sigma;
        j["dep_trials"] = sc.dep_trials;
    } else {
        const auto& dv = std::get<DepViolation>(c.result);
        j["certificate"] = "dep_violation";
        j["gamma1"] = dv.gamma1;
        j["gamma2"] = dv.gamma2;
        j["r"] = dv.r;
        j["witness"] = quadruple_to_json(dv.witness);
    }
    return j;
}

std::vector<std::pair<double, double>> read_samples_csv(std::istream& in) {
    std::vector<std::pair<double, double>> samples;
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (header) {
            if (line != "r,C")
                throw InvalidInput("samples CSV must start with header 'r,C'");
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidInput("samples CSV: missing comma on line " +
                               std::to_string(lineno));
        double r = 0.0, c = 0.0;
        const char* b1 = line.data();
        const char* e1 = line.data() + comma;
        const char* b2 = line.data() + comma + 1;
        const char* e2 = line.data() + line.size();
        auto r1 = std::from_chars(b1, e1, r);
        auto r2 = std::from_chars(b2, e2, c);
        if (r1.ec != std::errc() || r1.ptr != e1 || r2.ec != std::errc() ||
            r2.ptr != e2)
            throw InvalidInput("samples CSV: bad number on line " +
                               std::to_string(lineno));
        samples.emplace_back(r, c);
    }
    if (header) throw InvalidInput("samples CSV is empty");
    return samples;
}

void write_samples_csv(std::ostream& out,
                       const std::vector<std::pair<double, double>>& samples) {
    out << "r,C\n";
    for (const auto& [r, c] : samples)
        out << format_double(r) << ',' << format_double(c) << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<double>& xs,
                     const std::vector<Vec>& points) {
    if (xs.size() != points.size())
        throw DimensionMismatch("write_curve_csv: xs/points size mismatch");
    const int n = points.empty() ? 0 : static_cast<int>(points[0].size());
    out << "x";
    for (int i = 1; i <= n; ++i) out << ",h_" << i;
    out << '\n';
    for (size_t j = 0; j < xs.size(); ++j) {
        out << format_double(xs[j]);
        for (int i = 0; i < n; ++i) out << ',' << format_double(points[j][i]);
        out << '\n';
    }
}

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("JSON parse error in ") + path + ": " +
                           e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open file for writing: " + path);
    out << text;
}

}  // namespace depgeo::io
