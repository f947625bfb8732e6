#include "depgeo/chord.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace depgeo {

namespace {

// d^order/dr^order of -cos(r kappa) cycles through sin, cos, -sin, -cos.
double trig_phase(double x, int order) {
    switch (order % 4) {
        case 1: return std::sin(x);
        case 2: return std::cos(x);
        case 3: return -std::sin(x);
        default: return -std::cos(x);
    }
}

}  // namespace

double chord_term_derivative(const ChordTerm& term, double r, int order) {
    if (order == 0)
        return term.weight * term.weight * (2.0 - 2.0 * std::cos(r * term.kappa));
    return 2.0 * term.weight * term.weight * std::pow(term.kappa, order) *
           trig_phase(r * term.kappa, order);
}

ChordCoeffs::ChordCoeffs(double lambda, std::vector<ChordTerm> terms,
                         double merge_tol)
    : lambda_(lambda) {
    if (lambda < 0)
        throw InvalidInput("ChordCoeffs: lambda must be nonnegative", lambda);
    for (const auto& t : terms) {
        if (!(t.kappa > 0))
            throw InvalidInput("ChordCoeffs: kappa must be positive", t.kappa);
        if (!(t.weight > 0))
            throw InvalidInput("ChordCoeffs: weight must be positive", t.weight);
    }
    std::sort(terms.begin(), terms.end(),
              [](const ChordTerm& a, const ChordTerm& b) { return a.kappa < b.kappa; });
    for (const auto& t : terms) {
        if (!terms_.empty() && t.kappa - terms_.back().kappa <= merge_tol) {
            // same frequency: radii combine as root-sum-square
            ChordTerm& prev = terms_.back();
            prev.weight = std::hypot(prev.weight, t.weight);
        } else {
            terms_.push_back(t);
        }
    }
}

double ChordCoeffs::eval_profile(double r) const {
    if (r < 0) throw NegativeR("eval_profile: r must be nonnegative", r);
    double v = (r * lambda_) * (r * lambda_);
    for (const auto& t : terms_) v += chord_term_derivative(t, r, 0);
    return v;
}

double ChordCoeffs::derivative(double r, int order) const {
    if (order < 1) throw InvalidInput("derivative: order must be >= 1");
    double v = 0.0;
    if (order == 1) v = 2.0 * lambda_ * lambda_ * r;
    if (order == 2) v = 2.0 * lambda_ * lambda_;
    for (const auto& t : terms_) v += chord_term_derivative(t, r, order);
    return v;
}

double ChordCoeffs::coeff_distance(const ChordCoeffs& other) const {
    double d = std::abs(lambda_ - other.lambda_);
    if (terms_.size() != other.terms_.size())
        return std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < terms_.size(); ++i) {
        d = std::max(d, std::abs(terms_[i].kappa - other.terms_[i].kappa));
        d = std::max(d, std::abs(terms_[i].weight - other.terms_[i].weight));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Derivative-oracle recovery
// ---------------------------------------------------------------------------

namespace {

struct WorkOracle {
    const std::function<double(double, int)>& base;
    std::vector<ChordTerm> removed;

    double operator()(double r, int order) const {
        double v = base(r, order);
        for (const auto& t : removed) v -= chord_term_derivative(t, r, order);
        return v;
    }
};

// Aitken delta-squared extrapolation of the last three estimates; falls back
// to the last value when the differences have already collapsed.
double aitken(double a, double b, double c) {
    const double d1 = b - a, d2 = c - b;
    const double denom = d2 - d1;
    if (std::abs(denom) < 1e-15 * std::max(std::abs(c), 1.0)) return c;
    const double extrap = c - d2 * d2 / denom;
    // reject wild extrapolations (non-geometric error sequences)
    if (!(extrap > 0) || std::abs(extrap - c) > 0.5 * std::abs(c)) return c;
    return extrap;
}

}  // namespace

ChordCoeffs recover_via_derivatives(
    const std::function<double(double, int)>& oracle, double kappa_cap,
    const std::vector<double>& grid, double validate_rel) {
    if (grid.size() < 4)
        throw InvalidInput("recover_via_derivatives: grid too small");
    if (!(kappa_cap > 0))
        throw InvalidInput("recover_via_derivatives: kappa_cap must be positive");

    auto grid_max = [&](auto&& f, int order) {
        double m = 0.0;
        for (double r : grid) m = std::max(m, std::abs(f(r, order)));
        return m;
    };

    WorkOracle work{oracle, {}};
    const double scale2 = grid_max(oracle, 2);
    double scale_order[3];
    for (int n = 2; n <= 4; ++n) {
        double s = grid_max(oracle, 4 * n + 1);
        scale_order[n - 2] = s > 0.0 ? s : std::max(scale2, 1.0);
    }

    // Stop peeling terms once the leftover is invisible at the orders the
    // result is validated against (quadratic parts vanish there).
    auto leftover = [&]() {
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n)
            worst = std::max(worst, grid_max(work, 4 * n + 1) / scale_order[n - 2]);
        return worst;
    };

    const int max_rounds = 24;
    for (int round = 0; round < max_rounds; ++round) {
        if (leftover() <= 0.2 * validate_rel) break;
        const double f9 = grid_max(work, 9);

        // Reference point: where the current order-17 derivative peaks, so
        // sin(r kappa_s) is away from zero there.
        double rstar = grid.front();
        double best = -1.0;
        for (double r : grid) {
            const double v = std::abs(work(r, 17));
            if (v > best) {
                best = v;
                rstar = r;
            }
        }

        // Growth-rate estimates rho_m = (f_{m+1}/f_m)^{1/4} -> kappa_s. The
        // sequence converges geometrically at first; in later rounds the
        // subtraction noise of already-removed (larger) frequencies takes
        // over at very high orders, so the estimate is taken where the
        // consecutive differences are quietest.
        std::vector<double> rho;
        std::vector<int> rho_order;
        {
            double f_prev = work(rstar, 9);
            for (int n = 2; n <= 80; ++n) {
                const int next_order = 4 * (n + 1) + 1;
                const double f_next = work(rstar, next_order);
                if (!std::isfinite(f_next) || std::abs(f_next) > 1e270) break;
                if (f_prev == 0.0 || f_next / f_prev <= 0.0) {
                    f_prev = f_next;  // contaminated low orders, keep going
                    continue;
                }
                rho.push_back(std::pow(f_next / f_prev, 0.25));
                rho_order.push_back(next_order);
                f_prev = f_next;
                const size_t m = rho.size();
                if (m >= 2 &&
                    std::abs(rho[m - 1] - rho[m - 2]) <= 1e-13 * rho[m - 1])
                    break;
            }
        }
        if (rho.empty())
            throw NoConvergence(
                "recover_via_derivatives: growth-rate estimates did not form", f9);

        // Candidate plateaus: local minima of the consecutive differences,
        // in ascending order (the signal plateau precedes the noise one),
        // then the global minimum as a fallback.
        std::vector<size_t> candidates;
        if (rho.size() == 1) candidates.push_back(0);
        std::vector<double> diff(rho.size(), 0.0);
        for (size_t m = 1; m < rho.size(); ++m)
            diff[m] = std::abs(rho[m] - rho[m - 1]) / rho[m];
        for (size_t m = 1; m < rho.size(); ++m) {
            const bool left_ok = m == 1 || diff[m] <= diff[m - 1];
            const bool right_ok = m + 1 >= rho.size() || diff[m] <= diff[m + 1];
            if (left_ok && right_ok) candidates.push_back(m);
        }
        if (rho.size() > 1) {
            size_t global = 1;
            for (size_t m = 2; m < rho.size(); ++m)
                if (diff[m] < diff[global]) global = m;
            candidates.push_back(global);
        }

        // Accept the first candidate whose term actually explains the
        // lowest trigonometric order.
        bool accepted = false;
        for (size_t m : candidates) {
            double kappa_hat;
            if (m >= 2 && diff[m] > 1e-12)
                kappa_hat = aitken(rho[m - 2], rho[m - 1], rho[m]);
            else
                kappa_hat = rho[m];
            if (!(kappa_hat > 0) || kappa_hat > kappa_cap * (1.0 + 1e-9)) continue;

            // weight by projecting C^(p)(r) / (2 kappa^p) onto sin(r kappa)
            const int p = rho_order[m];
            double num = 0.0, den = 0.0;
            for (double r : grid) {
                const double s = std::sin(r * kappa_hat);
                num += work(r, p) * s;
                den += s * s;
            }
            if (den == 0.0 || num <= 0.0) continue;
            const double log_w2 = std::log(num / den / 2.0) - p * std::log(kappa_hat);
            const double weight = std::exp(0.5 * log_w2);
            if (!std::isfinite(weight) || weight <= 0.0) continue;

            ChordTerm term{kappa_hat, weight};
            double explained = 0.0;
            for (double r : grid)
                explained = std::max(
                    explained, std::abs(work(r, 9) - chord_term_derivative(term, r, 9)));
            if (explained > 0.6 * f9) continue;

            work.removed.push_back(term);
            accepted = true;
            break;
        }
        if (!accepted)
            throw NoConvergence(
                "recover_via_derivatives: no growth-rate plateau explains the "
                "remaining oscillation",
                f9);
    }

    // Quadratic coefficient from C'' once the oscillation is subtracted:
    // C''(r) = 2 lambda^2 + sum 2 w^2 k^2 cos(r k).
    double acc = 0.0;
    for (double r : grid) acc += work(r, 2);
    const double lambda2 = acc / static_cast<double>(grid.size()) / 2.0;
    const double lambda = std::sqrt(std::max(lambda2, 0.0));

    std::vector<ChordTerm> terms;
    for (const auto& t : work.removed)
        if (t.weight > tol::weight_drop) terms.push_back(t);
    ChordCoeffs out(lambda, std::move(terms));

    // Validation: reproduce the oracle's order-(4n+1) values, n in {2,3,4}.
    double worst = 0.0;
    for (int n = 2; n <= 4; ++n) {
        const int order = 4 * n + 1;
        double scale = grid_max(oracle, order);
        if (scale == 0.0) scale = std::max(scale2, 1.0);
        for (double r : grid)
            worst = std::max(
                worst, std::abs(out.derivative(r, order) - oracle(r, order)) / scale);
    }
    if (worst > validate_rel)
        throw NoConvergence(
            "recover_via_derivatives: recovered profile fails validation", worst);
    return out;
}

// ---------------------------------------------------------------------------
// Sample-based recovery (ESPRIT on second differences)
// ---------------------------------------------------------------------------

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Least squares of the sample vector against the chord-profile model with
// fixed frequencies; returns (lambda^2, weights^2) clamped at zero, dropping
// columns that come out negative.
struct ModelFit {
    double lambda2 = 0.0;
    std::vector<double> w2;  // parallel to kappas
    double max_resid = 0.0;
};

ModelFit fit_weights(const std::vector<std::pair<double, double>>& samples,
                     const std::vector<double>& kappas) {
    const int m = static_cast<int>(samples.size());
    std::vector<int> active(kappas.size());
    for (size_t i = 0; i < kappas.size(); ++i) active[i] = static_cast<int>(i);
    bool use_lambda = true;

    ModelFit fit;
    fit.w2.assign(kappas.size(), 0.0);
    for (int pass = 0; pass < static_cast<int>(kappas.size()) + 2; ++pass) {
        const int cols = (use_lambda ? 1 : 0) + static_cast<int>(active.size());
        if (cols == 0) break;
        MatrixXd X(m, cols);
        VectorXd y(m);
        for (int j = 0; j < m; ++j) {
            const double r = samples[j].first;
            int c = 0;
            if (use_lambda) X(j, c++) = r * r;
            for (int idx : active)
                X(j, c++) = 2.0 - 2.0 * std::cos(r * kappas[idx]);
            y[j] = samples[j].second;
        }
        VectorXd sol = X.colPivHouseholderQr().solve(y);

        // drop the most negative coefficient and re-solve
        int drop = -1;
        double most_negative = -1e-18;
        int c = 0;
        if (use_lambda && sol[c++] < most_negative) {
            most_negative = sol[0];
            drop = -2;  // marker: lambda column
        }
        for (size_t i = 0; i < active.size(); ++i)
            if (sol[c + static_cast<int>(i)] < most_negative) {
                most_negative = sol[c + static_cast<int>(i)];
                drop = static_cast<int>(i);
            }
        if (drop == -2) {
            use_lambda = false;
            continue;
        }
        if (drop >= 0) {
            active.erase(active.begin() + drop);
            continue;
        }

        c = 0;
        fit.lambda2 = use_lambda ? std::max(sol[c++], 0.0) : 0.0;
        for (size_t i = 0; i < active.size(); ++i)
            fit.w2[active[i]] = std::max(sol[c + static_cast<int>(i)], 0.0);
        break;
    }
    return fit;
}

double model_residual(const std::vector<std::pair<double, double>>& samples,
                      double lambda2, const std::vector<double>& kappas,
                      const std::vector<double>& w2) {
    double worst = 0.0;
    for (const auto& [r, y] : samples) {
        double v = lambda2 * r * r;
        for (size_t i = 0; i < kappas.size(); ++i)
            v += w2[i] * (2.0 - 2.0 * std::cos(r * kappas[i]));
        worst = std::max(worst, std::abs(v - y));
    }
    return worst;
}

// Gauss-Newton polish of the frequencies (weights re-fit linearly after
// each step). Keeps a step only when the residual improves.
std::vector<double> polish_frequencies(
    const std::vector<std::pair<double, double>>& samples,
    std::vector<double> kappas, double& resid_io) {
    if (kappas.empty()) return kappas;
    for (int iter = 0; iter < 8; ++iter) {
        ModelFit fit = fit_weights(samples, kappas);
        const int m = static_cast<int>(samples.size());
        const int k = static_cast<int>(kappas.size());
        MatrixXd J(m, k);
        VectorXd res(m);
        for (int j = 0; j < m; ++j) {
            const double r = samples[j].first;
            double v = fit.lambda2 * r * r;
            for (int i = 0; i < k; ++i) {
                v += fit.w2[i] * (2.0 - 2.0 * std::cos(r * kappas[i]));
                J(j, i) = fit.w2[i] * 2.0 * r * std::sin(r * kappas[i]);
            }
            res[j] = samples[j].second - v;
        }
        VectorXd step = J.colPivHouseholderQr().solve(res);
        std::vector<double> trial = kappas;
        for (int i = 0; i < k; ++i) trial[i] = kappas[i] + step[i];
        bool ok = true;
        for (double t : trial)
            if (!(t > 0)) ok = false;
        if (!ok) break;
        ModelFit tfit = fit_weights(samples, trial);
        const double tres = model_residual(samples, tfit.lambda2, trial, tfit.w2);
        if (tres < resid_io) {
            kappas = trial;
            resid_io = tres;
        } else {
            break;
        }
    }
    return kappas;
}

}  // namespace

ChordCoeffs recover_from_samples(
    const std::vector<std::pair<double, double>>& samples, int max_terms,
    double rel_tol, double rank_tol, double weight_floor) {
    if (max_terms < 0)
        throw InvalidInput("recover_from_samples: max_terms must be >= 0");
    const int count = static_cast<int>(samples.size());
    const int N = count - 1;  // samples at j = 0..N
    if (N < 4 * max_terms + 8)
        throw TooFewSamples("recover_from_samples: need N >= 4*max_terms + 8",
                            static_cast<double>(N));

    const double r0 = samples[0].first;
    const double delta = samples[1].first - samples[0].first;
    if (!(delta > 0))
        throw InvalidInput("recover_from_samples: grid must be increasing", delta);
    double grid_dev = 0.0;
    double ymax = 0.0;
    for (int j = 0; j < count; ++j) {
        grid_dev = std::max(grid_dev,
                            std::abs(samples[j].first - (r0 + j * delta)));
        ymax = std::max(ymax, std::abs(samples[j].second));
    }
    if (grid_dev > 1e-9 * std::max(1.0, std::abs(samples.back().first)))
        throw InvalidInput("recover_from_samples: grid is not uniform", grid_dev);

    if (ymax == 0.0) return ChordCoeffs(0.0, {});

    // Second central differences kill the quadratic exactly and leave
    //   z_j = 2 lambda^2 delta^2 + sum_k A_k cos(kappa_k (r0 + j delta)).
    const int M = N - 1;
    VectorXd z(M);
    for (int j = 1; j < count - 1; ++j)
        z[j - 1] = samples[j + 1].second - 2.0 * samples[j].second +
                   samples[j - 1].second;

    const int p_cap = 2 * max_terms + 1;
    int L = std::clamp(M / 2, p_cap + 1, M - p_cap - 1);

    MatrixXd H(L, M - L + 1);
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < M - L + 1; ++j) H(i, j) = z[i + j];

    Eigen::BDCSVD<MatrixXd> svd(H, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * sv[0]) ++rank;
    rank = std::min(rank, p_cap);

    std::vector<double> kappas;
    if (rank > 0 && max_terms > 0) {
        MatrixXd U = svd.matrixU().leftCols(rank);
        MatrixXd Uup = U.topRows(L - 1);
        MatrixXd Udn = U.bottomRows(L - 1);
        MatrixXd Psi = Uup.colPivHouseholderQr().solve(Udn);
        Eigen::EigenSolver<MatrixXd> es(Psi);
        if (es.info() != Eigen::Success)
            throw Aliasing("recover_from_samples: shift-operator eigensolve failed");
        std::vector<double> omegas;
        for (int i = 0; i < rank; ++i) {
            const std::complex<double> mu = es.eigenvalues()[i];
            if (std::abs(std::abs(mu) - 1.0) > 0.2) continue;  // spurious mode
            const double w = std::abs(std::arg(mu));
            if (w > 1e-7 && w < M_PI - 1e-12) omegas.push_back(w);
        }
        std::sort(omegas.begin(), omegas.end());
        for (double w : omegas) {
            if (!kappas.empty() && w / delta - kappas.back() <= tol::rate_merge)
                continue;
            kappas.push_back(w / delta);
        }
        if (static_cast<int>(kappas.size()) > max_terms)
            kappas.resize(max_terms);
    }

    ModelFit fit = fit_weights(samples, kappas);
    double resid = model_residual(samples, fit.lambda2, kappas, fit.w2);
    if (resid > 0.5 * rel_tol * ymax) {
        kappas = polish_frequencies(samples, kappas, resid);
        fit = fit_weights(samples, kappas);
        resid = model_residual(samples, fit.lambda2, kappas, fit.w2);
    }

    std::vector<ChordTerm> terms;
    for (size_t i = 0; i < kappas.size(); ++i) {
        const double w = std::sqrt(fit.w2[i]);
        if (w > weight_floor) terms.push_back({kappas[i], w});
    }
    // minimal term count: re-fit with the surviving frequencies only
    if (terms.size() != kappas.size()) {
        std::vector<double> kept;
        for (const auto& t : terms) kept.push_back(t.kappa);
        fit = fit_weights(samples, kept);
        resid = model_residual(samples, fit.lambda2, kept, fit.w2);
        terms.clear();
        for (size_t i = 0; i < kept.size(); ++i) {
            const double w = std::sqrt(fit.w2[i]);
            if (w > weight_floor) terms.push_back({kept[i], w});
        }
    }

    if (resid > rel_tol * ymax)
        throw Aliasing("recover_from_samples: residual not reducible", resid / ymax);

    return ChordCoeffs(std::sqrt(fit.lambda2), std::move(terms));
}

bool profiles_equal(const ChordCoeffs& c1, const ChordCoeffs& c2, double r_max,
                    int grid_n, double tol) {
    if (grid_n < 2) throw InvalidInput("profiles_equal: grid_n must be >= 2");
    for (int i = 0; i < grid_n; ++i) {
        const double r = r_max * static_cast<double>(i) / (grid_n - 1);
        if (std::abs(c1.eval_profile(r) - c2.eval_profile(r)) > tol) return false;
    }
    return true;
}

}  // namespace depgeo
