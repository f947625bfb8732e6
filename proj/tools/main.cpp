// depgeo command line tool: helix sampling, chord-profile recovery, DEP
// fuzzing and the similarity/violation certificate, with reproducible seeds.
//
// Exit codes: 0 success/pass, 2 input error, 3 precondition failure,
// 4 DEP counterexample.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "depgeo/io.hpp"

namespace {

using depgeo::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitCounterexample = 4;

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        depgeo::io::write_text_file(out_path, text);
}

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw depgeo::InvalidInput("bad number in list: " + item);
        }
    }
    return out;
}

int cmd_helix(const std::string& spec_path, const std::string& a_str,
              double x_min, double x_max, int steps, const std::string& out,
              const std::string& coeffs_out, const std::string& format) {
    depgeo::OneParamGroup g = depgeo::io::group_from_json(
        depgeo::io::parse_json_file(spec_path));
    std::vector<double> a_list = parse_number_list(a_str);
    depgeo::Vec a(a_list.size());
    for (size_t i = 0; i < a_list.size(); ++i) a[i] = a_list[i];
    if (a.size() != g.dim())
        throw depgeo::DimensionMismatch("point a does not match the group dimension");
    if (steps < 1) throw depgeo::InvalidInput("steps must be >= 1");

    std::vector<double> xs;
    std::vector<depgeo::Vec> pts;
    for (int k = 0; k < steps; ++k) {
        const double x = x_min + (x_max - x_min) * static_cast<double>(k) /
                                     static_cast<double>(steps);
        xs.push_back(x);
        pts.push_back(g.curve_point(a, x));
    }
    json coeffs = depgeo::io::coeffs_to_json(g.curve_chord_coeffs(a));

    if (format == "json") {
        json j;
        j["curve"] = json::array();
        for (size_t k = 0; k < xs.size(); ++k) {
            json row = json::array();
            row.push_back(xs[k]);
            for (int i = 0; i < pts[k].size(); ++i) row.push_back(pts[k][i]);
            j["curve"].push_back(row);
        }
        j["coeffs"] = coeffs;
        emit(out, j.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        depgeo::io::write_curve_csv(csv, xs, pts);
        emit(out, csv.str());
        emit(coeffs_out, coeffs.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_recover(const std::string& samples_path, int max_terms,
                const std::string& out) {
    std::ifstream in(samples_path);
    if (!in) throw depgeo::InvalidInput("cannot open file: " + samples_path);
    auto samples = depgeo::io::read_samples_csv(in);
    depgeo::ChordCoeffs c = depgeo::recover_from_samples(samples, max_terms);

    double worst = 0.0, scale = 0.0;
    for (const auto& [r, y] : samples) {
        worst = std::max(worst, std::abs(c.eval_profile(r) - y));
        scale = std::max(scale, std::abs(y));
    }
    json j = depgeo::io::coeffs_to_json(c);
    j["residual"] = {{"max_abs", worst},
                     {"max_rel", scale > 0 ? worst / scale : 0.0},
                     {"n_samples", samples.size()}};
    emit(out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_depcheck(const std::string& spec_path, const std::string& box_str,
                 int trials, double tol, std::uint64_t seed,
                 const std::string& out) {
    depgeo::ProductMap pm = depgeo::io::product_map_from_json(
        depgeo::io::parse_json_file(spec_path));
    std::vector<double> box_list = parse_number_list(box_str);
    if (box_list.size() != 2)
        throw depgeo::InvalidInput("--box must be 'lo,hi'");
    if (trials < 1) throw depgeo::InvalidInput("trials must be >= 1");

    depgeo::DepVerdict v = depgeo::dep_test(
        [&pm](double x, double y) { return pm.eval(x, y); },
        {box_list[0], box_list[1]}, trials, tol, seed);
    emit(out, depgeo::io::verdict_to_json(v).dump(2) + "\n");
    return v.pass ? kExitOk : kExitCounterexample;
}

int cmd_theorem(const std::string& spec_path, int gammas, int random_gammas,
                double r_max, int r_steps, int trials, double tol,
                std::uint64_t seed, const std::string& out) {
    depgeo::ProductMap pm = depgeo::io::product_map_from_json(
        depgeo::io::parse_json_file(spec_path));
    if (gammas < 1 || r_steps < 2)
        throw depgeo::InvalidInput("need gammas >= 1 and rsteps >= 2");

    std::vector<double> gamma_grid, r_grid;
    for (int i = 0; i < gammas; ++i)
        gamma_grid.push_back(M_PI * static_cast<double>(i) /
                             static_cast<double>(gammas));
    for (int i = 1; i <= r_steps; ++i)
        r_grid.push_back(r_max * static_cast<double>(i) /
                         static_cast<double>(r_steps));

    depgeo::TheoremOptions opts;
    opts.random_gammas = random_gammas;
    opts.seed = seed;
    opts.tol = tol;
    opts.dep_trials = trials;

    depgeo::TheoremCertificate cert =
        depgeo::theorem_witness(pm, r_grid, gamma_grid, opts);
    emit(out, depgeo::io::certificate_to_json(cert).dump(2) + "\n");
    return cert.is_similarity() ? kExitOk : kExitCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for distance-equality-preserving maps"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::uint64_t seed = 0;
    double tol = depgeo::tol::dep;
    std::string out;
    app.add_option("--seed", seed, "random seed (default 0)");
    app.add_option("--tol", tol, "tolerance override");
    app.add_option("--out", out, "output path (default stdout)");

    auto* helix = app.add_subcommand("helix", "sample a generalized helix");
    std::string helix_spec, helix_a = "", helix_coeffs_out, helix_format = "csv";
    double x_min = 0.0, x_max = 1.0;
    int steps = 64;
    helix->add_option("--spec", helix_spec, "group spec JSON")->required();
    helix->add_option("--a", helix_a, "start point, comma separated")->required();
    helix->add_option("--xmin", x_min, "parameter start");
    helix->add_option("--xmax", x_max, "parameter end");
    helix->add_option("--steps", steps, "number of rows");
    helix->add_option("--coeffs-out", helix_coeffs_out,
                      "path for the chord coefficient JSON");
    helix->add_option("--format", helix_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* recover = app.add_subcommand("recover", "recover chord coefficients");
    std::string rec_samples;
    int max_terms = 4;
    recover->add_option("--samples", rec_samples, "samples CSV (header r,C)")
        ->required();
    recover->add_option("--max-terms", max_terms, "maximum trigonometric terms");

    auto* depcheck = app.add_subcommand("depcheck", "randomized DEP test");
    std::string dep_spec, dep_box = "-5,5";
    int dep_trials = 10000;
    depcheck->add_option("--spec", dep_spec, "product map spec JSON")->required();
    depcheck->add_option("--box", dep_box, "domain box 'lo,hi'");
    depcheck->add_option("--trials", dep_trials, "number of random quadruples");

    auto* theorem = app.add_subcommand("theorem", "similarity certificate or witness");
    std::string thm_spec;
    int thm_gammas = 16, thm_random = 8, thm_rsteps = 64, thm_trials = 10000;
    double thm_rmax = 10.0;
    theorem->add_option("--spec", thm_spec, "product map spec JSON")->required();
    theorem->add_option("--gammas", thm_gammas, "size of the direction grid");
    theorem->add_option("--random-gammas", thm_random, "extra random directions");
    theorem->add_option("--rmax", thm_rmax, "radial grid extent");
    theorem->add_option("--rsteps", thm_rsteps, "radial grid size");
    theorem->add_option("--trials", thm_trials, "dep_test trials for cross-check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (helix->parsed())
            return cmd_helix(helix_spec, helix_a, x_min, x_max, steps, out,
                             helix_coeffs_out, helix_format);
        if (recover->parsed()) return cmd_recover(rec_samples, max_terms, out);
        if (depcheck->parsed())
            return cmd_depcheck(dep_spec, dep_box, dep_trials, tol, seed, out);
        if (theorem->parsed())
            return cmd_theorem(thm_spec, thm_gammas, thm_random, thm_rmax,
                               thm_rsteps, thm_trials, tol, seed, out);
    } catch (const depgeo::NotCommuting& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const depgeo::Aliasing& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const depgeo::TooFewSamples& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const depgeo::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const depgeo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
