#include "depgeo/anchor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace depgeo {

namespace {

// Lexicographic binary-search index over points, tolerance per coordinate.
struct PointIndex {
    const std::vector<Vec>* pts;
    std::vector<int> order;
    double tol;

    explicit PointIndex(const std::vector<Vec>& p, double t) : pts(&p), tol(t) {
        order.resize(p.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::lexicographical_compare(
                p[a].data(), p[a].data() + p[a].size(), p[b].data(),
                p[b].data() + p[b].size());
        });
    }

    int find(const Vec& q) const {
        // binary search on the first coordinate, then scan the slab
        const auto& p = *pts;
        const int m = static_cast<int>(p.size());
        if (m == 0) return -1;
        const int d = static_cast<int>(q.size());
        if (d == 0) return order[0];
        int lo = 0, hi = m;
        const double key = d > 0 ? q[0] - tol : 0.0;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            const double v = d > 0 ? p[order[mid]][0] : 0.0;
            if (v < key)
                lo = mid + 1;
            else
                hi = mid;
        }
        for (int i = lo; i < m; ++i) {
            const int idx = order[i];
            if (d > 0 && p[idx][0] > q[0] + tol) break;
            if ((p[idx] - q).cwiseAbs().maxCoeff() <= tol) return idx;
        }
        return -1;
    }
};

}  // namespace

SampledMonoidMap::SampledMonoidMap(Eigen::MatrixXi product_table, int unit,
                                   std::vector<Vec> images)
    : table_(std::move(product_table)), unit_(unit), images_(std::move(images)) {
    const int m = static_cast<int>(images_.size());
    if (m == 0) throw EmptyCarrier("SampledMonoidMap: empty carrier");
    if (table_.rows() != m || table_.cols() != m)
        throw DimensionMismatch("SampledMonoidMap: product table must be size x size");
    if (unit_ < 0 || unit_ >= m)
        throw InvalidInput("SampledMonoidMap: unit index out of range");
    for (const auto& im : images_)
        if (im.size() != images_[0].size())
            throw DimensionMismatch("SampledMonoidMap: images of mixed dimension");
    for (int i = 0; i < m; ++i) {
        const int lu = table_(unit_, i), ru = table_(i, unit_);
        if ((lu >= 0 && lu != i) || (ru >= 0 && ru != i))
            throw InvalidInput("SampledMonoidMap: unit is not a two-sided identity");
    }
}

SampledMonoidMap SampledMonoidMap::from_vectors(const std::vector<Vec>& points,
                                                const std::vector<Vec>& images,
                                                double match_tol,
                                                double dep_domain_tol,
                                                double dep_image_tol) {
    const int m = static_cast<int>(points.size());
    if (m == 0) throw EmptyCarrier("SampledMonoidMap: empty carrier");
    if (images.size() != points.size())
        throw DimensionMismatch("SampledMonoidMap: points/images size mismatch");

    PointIndex index(points, match_tol);
    const Vec zero = Vec::Zero(points[0].size());
    const int unit = index.find(zero);
    if (unit < 0)
        throw InvalidInput("SampledMonoidMap: carrier must contain the zero vector");

    Eigen::MatrixXi table(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            table(i, j) = index.find(points[i] + points[j]);

    SampledMonoidMap out(std::move(table), unit, images);
    out.domain_points_ = points;

    const double resid = out.dep_residual(dep_domain_tol);
    if (resid > dep_image_tol)
        throw NotCongruent("SampledMonoidMap: samples violate the DEP property",
                           resid);
    return out;
}

std::optional<int> SampledMonoidMap::product(int i, int j) const {
    const int v = table_(i, j);
    if (v < 0) return std::nullopt;
    return v;
}

double SampledMonoidMap::dep_residual(double domain_tol) const {
    if (domain_points_.empty()) return 0.0;
    const int m = size();
    struct PairDist {
        double domain;
        double image;
    };
    std::vector<PairDist> pairs;
    pairs.reserve(static_cast<size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            pairs.push_back({(domain_points_[i] - domain_points_[j]).norm(),
                             (images_[i] - images_[j]).norm()});
    std::sort(pairs.begin(), pairs.end(),
              [](const PairDist& a, const PairDist& b) { return a.domain < b.domain; });

    double worst = 0.0;
    size_t start = 0;
    while (start < pairs.size()) {
        size_t end = start + 1;
        double lo = pairs[start].image, hi = pairs[start].image;
        while (end < pairs.size() &&
               pairs[end].domain - pairs[end - 1].domain <= domain_tol) {
            lo = std::min(lo, pairs[end].image);
            hi = std::max(hi, pairs[end].image);
            ++end;
        }
        worst = std::max(worst, hi - lo);
        start = end;
    }
    return worst;
}

SampledMonoidMap SampledMonoidMap::with_images(std::vector<Vec> images) const {
    if (images.size() != images_.size())
        throw DimensionMismatch("with_images: size mismatch");
    SampledMonoidMap out;
    out.table_ = table_;
    out.unit_ = unit_;
    out.images_ = std::move(images);
    out.domain_points_ = domain_points_;
    return out;
}

namespace {

// Affine rank of the image set: singular values of the centered image
// matrix below rank_tol * largest are treated as zero.
int image_hull_dim(const std::vector<Vec>& images, double rank_tol, Vec* center_out,
                   Mat* basis_out) {
    const int m = static_cast<int>(images.size());
    const int n = static_cast<int>(images[0].size());
    Vec center = Vec::Zero(n);
    for (const auto& im : images) center += im;
    center /= static_cast<double>(m);

    Mat X(n, m);
    for (int j = 0; j < m; ++j) X.col(j) = images[j] - center;
    Eigen::BDCSVD<Mat> svd(X, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int k = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[0] > 0.0 && sv[i] > rank_tol * sv[0]) ++k;
    if (center_out) *center_out = center;
    if (basis_out) *basis_out = svd.matrixU().leftCols(k);
    return std::min(k, n);
}

}  // namespace

AnchorFrame select_frame(const SampledMonoidMap& map, double rank_tol,
                         double gp_tol) {
    const auto& images = map.images();
    const int m = map.size();
    const int k = image_hull_dim(images, rank_tol, nullptr, nullptr);

    AnchorFrame frame;
    frame.hull_dim = k;
    if (k == 0) {
        frame.anchors = {0};
        frame.anchor_images = {images[0]};
        frame.certificate = 1.0;
        return frame;
    }

    // farthest pair, ties broken by carrier order
    int a0 = 0, a1 = 1;
    double best = -1.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double d = (images[i] - images[j]).norm();
            if (d > best) {
                best = d;
                a0 = i;
                a1 = j;
            }
        }
    std::vector<int> picks = {a0, a1};
    Mat basis(images[0].size(), k);  // orthonormal directions of the picks
    basis.col(0) = (images[a1] - images[a0]).normalized();
    int bcols = 1;

    while (static_cast<int>(picks.size()) < k + 1) {
        int arg = -1;
        double far = -1.0;
        for (int i = 0; i < m; ++i) {
            Vec r = images[i] - images[picks[0]];
            r -= basis.leftCols(bcols) * (basis.leftCols(bcols).transpose() * r);
            const double d = r.norm();
            if (d > far + 1e-15) {
                far = d;
                arg = i;
            }
        }
        picks.push_back(arg);
        Vec r = images[arg] - images[picks[0]];
        r -= basis.leftCols(bcols) * (basis.leftCols(bcols).transpose() * r);
        basis.col(bcols++) = r.normalized();
    }

    return make_frame(map, picks, rank_tol, gp_tol);
}

AnchorFrame make_frame(const SampledMonoidMap& map, const std::vector<int>& anchors,
                       double rank_tol, double gp_tol) {
    if (anchors.empty()) throw EmptyCarrier("make_frame: no anchors");
    AnchorFrame frame;
    frame.anchors = anchors;
    for (int idx : anchors) {
        if (idx < 0 || idx >= map.size())
            throw InvalidInput("make_frame: anchor index out of range");
        frame.anchor_images.push_back(map.image(idx));
    }
    frame.hull_dim = image_hull_dim(map.images(), rank_tol, nullptr, nullptr);
    if (static_cast<int>(anchors.size()) != frame.hull_dim + 1)
        throw DegenerateAnchors("make_frame: need hull_dim + 1 anchors",
                                static_cast<double>(anchors.size()));
    frame.certificate = cayley_menger(frame.anchor_images);
    if (!in_general_position(frame.anchor_images, gp_tol))
        throw DegenerateAnchors("make_frame: anchor images affinely dependent",
                                frame.certificate);
    return frame;
}

Motion extract_at(const SampledMonoidMap& map, const AnchorFrame& frame, int x,
                  double fit_tol, double congruence_tol) {
    const int n = map.range_dim();
    if (!frame.full_rank(n))
        throw DegenerateAnchors(
            "extract_at: frame spans a proper hull, reduce first",
            static_cast<double>(frame.hull_dim));

    std::vector<Vec> dst;
    for (int anchor : frame.anchors) {
        const auto p = map.product(x, anchor);
        if (!p)
            throw MissingProducts("extract_at: product x*anchor not in carrier");
        dst.push_back(map.image(*p));
    }
    Motion f = fit_motion(frame.anchor_images, dst, fit_tol, congruence_tol);

    // The motion must transport every available image, not only anchors.
    double worst = 0.0;
    for (int y = 0; y < map.size(); ++y) {
        const auto p = map.product(x, y);
        if (!p) continue;
        worst = std::max(
            worst, (f.apply(map.image(y)) - map.image(*p)).cwiseAbs().maxCoeff());
    }
    if (worst > std::max(fit_tol, congruence_tol))
        throw NotCongruent("extract_at: map is not DEP on the needed pairs", worst);
    return f;
}

namespace {

// Extraction driver that routes degenerate maps through the hull chart.
class Extractor {
public:
    Extractor(const SampledMonoidMap& map, const AnchorFrame& frame,
              double fit_tol, double congruence_tol)
        : map_(map), fit_tol_(fit_tol), congruence_tol_(congruence_tol) {
        if (frame.full_rank(map.range_dim())) {
            frame_ = frame;
        } else {
            // hull frames carry over: the same anchor indices are a full
            // frame for the charted images (the chart is an isometry)
            reduction_ = reduce_degenerate(map);
            frame_ = make_frame(reduction_->reduced, frame.anchors);
        }
    }

    const Motion& at(int x) {
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        Motion f = reduction_
                       ? embed_motion(reduction_->iso,
                                      extract_at(reduction_->reduced, frame_, x,
                                                 fit_tol_, congruence_tol_))
                       : extract_at(map_, frame_, x, fit_tol_, congruence_tol_);
        return cache_.emplace(x, std::move(f)).first->second;
    }

private:
    const SampledMonoidMap& map_;
    AnchorFrame frame_;
    std::optional<DegenerateReduction> reduction_;
    std::map<int, Motion> cache_;
    double fit_tol_, congruence_tol_;
};

}  // namespace

HomomorphismReport verify_homomorphism(
    const SampledMonoidMap& map, const AnchorFrame& frame,
    const std::vector<std::pair<int, int>>& pairs, double pass_tol,
    double unit_tol) {
    Extractor extract(map, frame, tol::anchor_fit, tol::congruence);
    HomomorphismReport report;

    const Vec& h1 = map.image(map.unit());
    auto unit_law = [&](int x) {
        const double r =
            (extract.at(x).apply(h1) - map.image(x)).cwiseAbs().maxCoeff();
        report.max_unit_residual = std::max(report.max_unit_residual, r);
    };

    for (const auto& [x, y] : pairs) {
        const auto xy = map.product(x, y);
        if (!xy)
            throw MissingProducts("verify_homomorphism: product x*y not in carrier");
        const Motion lhs = extract.at(*xy);
        const Motion rhs = compose(extract.at(x), extract.at(y));
        const double resid = motion_distance(lhs, rhs);
        report.pairs.push_back({x, y, resid});
        report.max_pair_residual = std::max(report.max_pair_residual, resid);
        unit_law(x);
        unit_law(y);
        unit_law(*xy);
    }
    report.passed = report.max_pair_residual <= pass_tol &&
                    report.max_unit_residual <= unit_tol;
    return report;
}

DegenerateReduction reduce_degenerate(const SampledMonoidMap& map,
                                      double rank_tol, double embed_tol) {
    Vec center;
    Mat basis;
    const int n = map.range_dim();
    const int k = image_hull_dim(map.images(), rank_tol, &center, &basis);
    if (k >= n)
        throw NotDegenerate("reduce_degenerate: image hull is full-dimensional",
                            static_cast<double>(k));

    DegenerateReduction red{k, HullIsometry{center, basis}, map, 0.0};
    std::vector<Vec> reduced;
    double worst = 0.0;
    for (const auto& im : map.images()) {
        const Vec u = red.iso.chart(im);
        worst = std::max(worst, (red.iso.apply(u) - im).cwiseAbs().maxCoeff());
        reduced.push_back(u);
    }
    if (worst > embed_tol)
        throw InvalidInput("reduce_degenerate: images stray from the detected hull",
                           worst);
    red.off_hull_residual = worst;
    red.reduced = map.with_images(std::move(reduced));
    return red;
}

Motion embed_motion(const HullIsometry& iso, const Motion& m) {
    const int n = iso.ambient_dim();
    const int k = iso.hull_dim();
    if (m.dim() != k)
        throw DimensionMismatch("embed_motion: motion dim != hull dim");

    // complete the hull basis to an orthonormal basis of R^n
    Mat full(n, n);
    full.leftCols(k) = iso.basis;
    Eigen::HouseholderQR<Mat> qr(iso.basis);
    Mat Qfull = qr.householderQ() * Mat::Identity(n, n);
    // first k columns of Qfull span the hull; take the rest as complement
    full.rightCols(n - k) = Qfull.rightCols(n - k);

    Mat W = full.rightCols(n - k);
    Mat Qn = iso.basis * m.Q() * iso.basis.transpose() + W * W.transpose();
    Vec tn = iso.origin - Qn * iso.origin + iso.basis * m.t();
    return Motion(polar_orthogonal(Qn), tn);
}

}  // namespace depgeo
