#include <doctest.h>

#include <cmath>

#include "depgeo/anchor.hpp"
#include "depgeo/helix.hpp"
#include "testutil.hpp"

using namespace depgeo;

namespace {

Vec v1(double a) {
    Vec v(1);
    v << a;
    return v;
}

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

// carrier: integer grid [-3,3]^2 in (R^2, +), images under a given map
SampledMonoidMap grid_map(const std::function<Vec(const Vec&)>& h) {
    std::vector<Vec> pts, imgs;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            Vec p = v2(i, j);
            pts.push_back(p);
            imgs.push_back(h(p));
        }
    return SampledMonoidMap::from_vectors(pts, imgs);
}

int index_of(const SampledMonoidMap& map, const Vec& p) {
    for (int i = 0; i < map.size(); ++i)
        if ((map.domain_points()[i] - p).norm() < 1e-12) return i;
    REQUIRE(false);
    return -1;
}

// helix carrier over (R, +): t = j * pi/8 for j in [-16, 16]
SampledMonoidMap helix_map(const OneParamGroup& g, const Vec& a) {
    std::vector<Vec> pts, imgs;
    for (int j = -16; j <= 16; ++j) {
        const double t = j * M_PI / 8.0;
        pts.push_back(v1(t));
        imgs.push_back(g.curve_point(a, t));
    }
    return SampledMonoidMap::from_vectors(pts, imgs);
}

}  // namespace

TEST_CASE("SampledMonoidMap construction") {
    SUBCASE("carrier must contain the unit") {
        std::vector<Vec> pts = {v2(1, 0), v2(0, 1)};
        CHECK_THROWS_AS(SampledMonoidMap::from_vectors(pts, pts), InvalidInput);
    }
    SUBCASE("DEP violation detected") {
        // equal domain distances, wildly different image distances
        std::vector<Vec> pts = {v2(0, 0), v2(1, 0), v2(0, 1)};
        std::vector<Vec> imgs = {v2(0, 0), v2(1, 0), v2(5, 0)};
        CHECK_THROWS_AS(SampledMonoidMap::from_vectors(pts, imgs), NotCongruent);
    }
    SUBCASE("products fall back to missing") {
        SampledMonoidMap m = grid_map([](const Vec& p) { return p; });
        const int corner = index_of(m, v2(3, 3));
        CHECK_FALSE(m.product(corner, corner).has_value());
        const int origin = index_of(m, v2(0, 0));
        CHECK(m.product(origin, corner).has_value());
    }
    SUBCASE("empty carrier") {
        CHECK_THROWS_AS(SampledMonoidMap::from_vectors({}, {}), EmptyCarrier);
    }
}

TEST_CASE("select_frame") {
    SUBCASE("four general-position points in R^3") {
        std::vector<Vec> pts = {v1(0), v1(1), v1(2), v1(3)};
        std::vector<Vec> imgs = {v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
        // distance-equality holds trivially? no: it does not need to for
        // frame selection tests; build via the abstract constructor.
        Eigen::MatrixXi table = Eigen::MatrixXi::Constant(4, 4, -1);
        for (int i = 0; i < 4; ++i) {
            table(0, i) = i;
            table(i, 0) = i;
        }
        SampledMonoidMap m(table, 0, imgs);
        AnchorFrame f = select_frame(m);
        CHECK(f.hull_dim == 3);
        CHECK(f.anchors.size() == 4);
        CHECK(f.certificate != 0.0);
    }
    SUBCASE("collinear images report hull dimension 1") {
        std::vector<Vec> pts = {v2(0, 0), v2(1, 0), v2(2, 0), v2(0, 1)};
        std::vector<Vec> imgs = {v2(0, 0), v2(1, 1), v2(2, 2), v2(3, 3)};
        // not DEP as a map, use the abstract constructor
        Eigen::MatrixXi table = Eigen::MatrixXi::Constant(4, 4, -1);
        for (int i = 0; i < 4; ++i) {
            table(0, i) = i;
            table(i, 0) = i;
        }
        SampledMonoidMap m(table, 0, imgs);
        AnchorFrame f = select_frame(m);
        CHECK(f.hull_dim == 1);
        CHECK(f.anchors.size() == 2);
    }
    SUBCASE("helix anchors have a healthy certificate") {
        OneParamGroup g(Motion::identity(3), {1.0}, v3(0, 0, 1));
        SampledMonoidMap m = helix_map(g, v3(1, 0, 0));
        AnchorFrame f = select_frame(m);
        CHECK(f.hull_dim == 3);

        // oracle: Cayley-Menger of the four sample points at 0, pi/2, pi, 3pi/2
        std::vector<Vec> quad;
        for (double t : {0.0, M_PI / 2, M_PI, 3 * M_PI / 2})
            quad.push_back(g.curve_point(v3(1, 0, 0), t));
        CHECK(in_general_position(quad));
        AnchorFrame manual = make_frame(
            m, {index_of(m, v1(0)), index_of(m, v1(M_PI / 2)),
                index_of(m, v1(M_PI)), index_of(m, v1(3 * M_PI / 2))});
        CHECK(manual.certificate == doctest::Approx(cayley_menger(quad)));
        // the greedy frame is at least as voluminous
        CHECK(std::abs(f.certificate) >= std::abs(manual.certificate) * 0.99);
    }
}

TEST_CASE("extract_at") {
    // h(x) = 2x is DEP from (R^2,+) into R^2; f_x = translation by 2x
    SampledMonoidMap m = grid_map([](const Vec& p) { return Vec(2.0 * p); });
    AnchorFrame frame = make_frame(m, {index_of(m, v2(0, 0)), index_of(m, v2(1, 0)),
                                       index_of(m, v2(0, 1))});

    SUBCASE("unit maps to the identity") {
        Motion f = extract_at(m, frame, m.unit());
        CHECK(motion_distance(f, Motion::identity(2)) <= 1e-9);
    }
    SUBCASE("dilation gives translations") {
        for (double u : {-1.0, 0.0, 1.0})
            for (double v : {-1.0, 1.0}) {
                Motion f = extract_at(m, frame, index_of(m, v2(u, v)));
                CHECK(motion_distance(f, Motion::translation(v2(2 * u, 2 * v))) <=
                      1e-9);
            }
    }
    SUBCASE("missing products surface") {
        CHECK_THROWS_AS(extract_at(m, frame, index_of(m, v2(3, 3))),
                        MissingProducts);
    }
    SUBCASE("helix extraction at pi/2 is the quarter screw") {
        OneParamGroup g(Motion::identity(3), {1.0}, v3(0, 0, 1));
        SampledMonoidMap hm = helix_map(g, v3(1, 0, 0));
        AnchorFrame hf = make_frame(
            hm, {index_of(hm, v1(0)), index_of(hm, v1(M_PI / 2)),
                 index_of(hm, v1(M_PI)), index_of(hm, v1(3 * M_PI / 2))});
        Motion f = extract_at(hm, hf, index_of(hm, v1(M_PI / 2)));
        Motion expect = g.eval(M_PI / 2);
        CHECK(motion_distance(f, expect) <= 1e-9);
    }
}

TEST_CASE("verify_homomorphism") {
    SUBCASE("dilation carrier passes on a pair grid") {
        SampledMonoidMap m = grid_map([](const Vec& p) { return Vec(2.0 * p); });
        AnchorFrame frame =
            make_frame(m, {index_of(m, v2(0, 0)), index_of(m, v2(1, 0)),
                           index_of(m, v2(0, 1))});
        std::vector<std::pair<int, int>> pairs;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                pairs.emplace_back(index_of(m, v2(i, j)), index_of(m, v2(-j, i)));
        HomomorphismReport rep = verify_homomorphism(m, frame, pairs);
        CHECK(rep.passed);
        CHECK(rep.max_pair_residual <= 1e-10);
        CHECK(rep.max_unit_residual <= 1e-10);
    }
    SUBCASE("unit pairs have zero residual") {
        SampledMonoidMap m = grid_map([](const Vec& p) { return Vec(2.0 * p); });
        AnchorFrame frame =
            make_frame(m, {index_of(m, v2(0, 0)), index_of(m, v2(1, 0)),
                           index_of(m, v2(0, 1))});
        HomomorphismReport rep =
            verify_homomorphism(m, frame, {{m.unit(), m.unit()}});
        CHECK(rep.max_pair_residual <= 1e-12);
    }
    SUBCASE("helix: f at pi/2 equals the square of f at pi/4") {
        OneParamGroup g(Motion::identity(3), {1.0}, v3(0, 0, 1));
        SampledMonoidMap hm = helix_map(g, v3(1, 0, 0));
        AnchorFrame hf = make_frame(
            hm, {index_of(hm, v1(0)), index_of(hm, v1(M_PI / 2)),
                 index_of(hm, v1(M_PI)), index_of(hm, v1(3 * M_PI / 2))});
        const int x = index_of(hm, v1(M_PI / 4));
        HomomorphismReport rep = verify_homomorphism(hm, hf, {{x, x}});
        CHECK(rep.passed);
        CHECK(rep.max_pair_residual <= 1e-9);
    }
    SUBCASE("missing product pair throws") {
        SampledMonoidMap m = grid_map([](const Vec& p) { return Vec(2.0 * p); });
        AnchorFrame frame =
            make_frame(m, {index_of(m, v2(0, 0)), index_of(m, v2(1, 0)),
                           index_of(m, v2(0, 1))});
        const int big = index_of(m, v2(3, 3));
        CHECK_THROWS_AS(verify_homomorphism(m, frame, {{big, big}}),
                        MissingProducts);
    }
}

TEST_CASE("reduce_degenerate") {
    SUBCASE("constant map reduces to dimension zero") {
        SampledMonoidMap m = grid_map([](const Vec&) { return v3(1, 2, 3); });
        DegenerateReduction red = reduce_degenerate(m);
        CHECK(red.k == 0);
        for (int i = 0; i < red.reduced.size(); ++i)
            CHECK(red.reduced.image(i).size() == 0);
    }
    SUBCASE("planar images in R^3 chart isometrically") {
        // h(x,y) = z0 + x*u + y*v with orthonormal u,v: planar isometry
        Vec z0 = v3(1, -1, 2);
        Vec u = v3(1, 0, 0), v = v3(0, std::sqrt(0.5), std::sqrt(0.5));
        SampledMonoidMap m = grid_map(
            [&](const Vec& p) { return Vec(z0 + p[0] * u + p[1] * v); });
        DegenerateReduction red = reduce_degenerate(m);
        CHECK(red.k == 2);
        CHECK(red.off_hull_residual <= 1e-12);
        // the chart preserves distances
        for (int i = 0; i < m.size(); i += 7)
            for (int j = 0; j < m.size(); j += 5) {
                const double d_amb = (m.image(i) - m.image(j)).norm();
                const double d_red =
                    (red.reduced.image(i) - red.reduced.image(j)).norm();
                CHECK(std::abs(d_amb - d_red) <= 1e-10);
            }
        // i(h'(x)) = h(x)
        for (int i = 0; i < m.size(); ++i)
            CHECK((red.iso.apply(red.reduced.image(i)) - m.image(i)).norm() <= 1e-9);
    }
    SUBCASE("full-rank images refuse to reduce") {
        OneParamGroup g(Motion::identity(3), {1.0}, v3(0, 0, 1));
        SampledMonoidMap hm = helix_map(g, v3(1, 0, 0));
        CHECK_THROWS_AS(reduce_degenerate(hm), NotDegenerate);
    }
}

TEST_CASE("embed_motion") {
    SUBCASE("identity embeds to the identity") {
        HullIsometry iso{v3(0, 0, 0), Mat::Identity(3, 2)};
        Motion g = embed_motion(iso, Motion::identity(2));
        CHECK(motion_distance(g, Motion::identity(3)) <= 1e-12);
    }
    SUBCASE("axis hull in R^2, translation by 3") {
        HullIsometry iso{v2(0, 0), Mat::Identity(2, 1)};
        Motion g = embed_motion(iso, Motion::translation(v1(3)));
        CHECK(motion_distance(g, Motion::translation(v2(3, 0))) <= 1e-12);
    }
    SUBCASE("plane hull in R^3, rotation embeds as rot + 1") {
        HullIsometry iso{v3(0, 0, 0), Mat::Identity(3, 2)};
        const double th = 0.8;
        Motion g = embed_motion(iso, Motion::plane_rotation(2, th));
        Motion expect = Motion::plane_rotation(3, th);
        CHECK(motion_distance(g, expect) <= 1e-12);
    }
    SUBCASE("intertwining g(m) o i = i o m on random hulls") {
        testutil::Rng rng(73);
        for (int rep = 0; rep < 20; ++rep) {
            const int n = testutil::uniform_int(rng, 2, 6);
            const int k = testutil::uniform_int(rng, 1, n - 1);
            Mat basis = testutil::random_orthogonal(rng, n).leftCols(k);
            HullIsometry iso{testutil::random_vec(rng, n, 2.0), basis};
            Motion m = testutil::random_motion(rng, k);
            Motion g = embed_motion(iso, m);
            for (int probe = 0; probe < 5; ++probe) {
                Vec u = testutil::random_vec(rng, k, 2.0);
                CHECK((g.apply(iso.apply(u)) - iso.apply(m.apply(u))).norm() <= 1e-10);
            }
            // identity on the orthogonal complement of the hull directions
            Vec w = testutil::random_vec(rng, n, 1.0);
            w -= basis * (basis.transpose() * w);
            Vec p = iso.apply(testutil::random_vec(rng, k, 1.0));
            CHECK(((g.apply(p + w) - g.apply(p)) - w).norm() <= 1e-10);
        }
    }
    SUBCASE("dimension mismatch") {
        HullIsometry iso{v3(0, 0, 0), Mat::Identity(3, 2)};
        CHECK_THROWS_AS(embed_motion(iso, Motion::identity(3)), DimensionMismatch);
    }
}

TEST_CASE("degenerate pipeline reproduces the map") {
    // planar similarity R^2 -> R^3: the full Lemma-1 degenerate chain
    Vec z0 = v3(0.5, 0.25, -1);
    Mat U(3, 2);
    U << std::sqrt(0.5), 0, std::sqrt(0.5), 0, 0, 1;
    const double sigma = 2.0;
    SampledMonoidMap m = grid_map(
        [&](const Vec& p) { return Vec(z0 + sigma * (U * p)); });

    AnchorFrame frame = select_frame(m);
    CHECK(frame.hull_dim == 2);

    // verify through central anchors so products exist
    AnchorFrame central =
        make_frame(m, {index_of(m, v2(0, 0)), index_of(m, v2(1, 0)),
                       index_of(m, v2(0, 1))});
    std::vector<std::pair<int, int>> pairs;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            pairs.emplace_back(index_of(m, v2(i, j)), index_of(m, v2(j, -i)));
    HomomorphismReport rep = verify_homomorphism(m, central, pairs);
    CHECK(rep.passed);
    CHECK(rep.max_pair_residual <= 1e-9);
    CHECK(rep.max_unit_residual <= 1e-9);
}

TEST_CASE("uniqueness: two frames extract the same homomorphism") {
    OneParamGroup g(Motion::identity(3), {1.0}, v3(0, 0, 1));
    SampledMonoidMap hm = helix_map(g, v3(1, 0, 0));
    AnchorFrame f1 = make_frame(
        hm, {index_of(hm, v1(0)), index_of(hm, v1(M_PI / 2)),
             index_of(hm, v1(M_PI)), index_of(hm, v1(3 * M_PI / 2))});
    AnchorFrame f2 = make_frame(
        hm, {index_of(hm, v1(-M_PI / 2)), index_of(hm, v1(M_PI / 4)),
             index_of(hm, v1(-M_PI)), index_of(hm, v1(M_PI))});
    for (int j = -4; j <= 4; ++j) {
        const int x = index_of(hm, v1(j * M_PI / 8.0));
        Motion a = extract_at(hm, f1, x);
        Motion b = extract_at(hm, f2, x);
        CHECK(motion_distance(a, b) <= 1e-8);
    }
}
