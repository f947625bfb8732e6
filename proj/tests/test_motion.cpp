#include <doctest.h>

#include <cmath>

#include "depgeo/motion.hpp"
#include "testutil.hpp"

using namespace depgeo;

namespace {

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

// Independent general-position oracle: CM determinant of a k-simplex equals
// (-1)^(k+1) 2^k det(G^T G) with G the edge matrix.
double cm_via_gram(const std::vector<Vec>& pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    Mat G(pts[0].size(), k);
    for (int i = 1; i <= k; ++i) G.col(i - 1) = pts[i] - pts[0];
    const double gram = (G.transpose() * G).determinant();
    return std::pow(-1.0, k + 1) * std::pow(2.0, k) * gram;
}

}  // namespace

TEST_CASE("motion basics and examples") {
    Motion rot90 = Motion::plane_rotation(2, M_PI / 2);
    Motion tr10 = Motion::translation(v2(1, 0));

    SUBCASE("compose with identity") {
        Motion m = compose(Motion::identity(2), rot90);
        CHECK(motion_distance(m, rot90) <= 1e-15);
    }
    SUBCASE("compose with inverse is the identity") {
        Motion m = compose(rot90, inverse(rot90));
        CHECK(motion_distance(m, Motion::identity(2)) <= 1e-12);
        Motion tr = compose(tr10, inverse(tr10));
        CHECK(motion_distance(tr, Motion::identity(2)) <= 1e-12);
    }
    SUBCASE("rotate-after-translate moves the origin up") {
        Motion m = compose(rot90, tr10);
        CHECK((m.apply(v2(0, 0)) - v2(0, 1)).norm() <= 1e-12);
    }
    SUBCASE("inverse examples") {
        CHECK(motion_distance(inverse(Motion::identity(3)), Motion::identity(3)) == 0.0);
        Motion tr = Motion::translation(v3(1, -2, 3));
        CHECK(motion_distance(inverse(tr), Motion::translation(v3(-1, 2, -3))) <= 1e-15);
        CHECK((inverse(rot90).apply(v2(0, 1)) - v2(1, 0)).norm() <= 1e-12);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(compose(rot90, Motion::identity(3)), DimensionMismatch);
    }
    SUBCASE("non-orthogonal Q rejected") {
        Mat Q(2, 2);
        Q << 1, 0.5, 0, 1;
        CHECK_THROWS_AS(Motion(Q, Vec::Zero(2)), InvalidInput);
    }
}

TEST_CASE("group laws, isometry (n in {2,3,5,8})") {
    testutil::Rng rng(7);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 50; ++rep) {
            Motion a = testutil::random_motion(rng, n);
            Motion b = testutil::random_motion(rng, n);
            Motion c = testutil::random_motion(rng, n);
            CHECK(motion_distance(compose(compose(a, b), c),
                                  compose(a, compose(b, c))) <= 1e-10);
            CHECK(motion_distance(compose(a, Motion::identity(n)), a) <= 1e-12);
            CHECK(motion_distance(compose(a, inverse(a)), Motion::identity(n)) <= 1e-12);

            Vec x = testutil::random_vec(rng, n, 3.0);
            Vec y = testutil::random_vec(rng, n, 3.0);
            CHECK(std::abs((a.apply(x) - a.apply(y)).norm() - (x - y).norm()) <= 1e-10);
        }
    }
}

TEST_CASE("cayley_menger matches the Gram-determinant oracle") {
    testutil::Rng rng(11);
    for (int n : {2, 3, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<Vec> pts;
            for (int i = 0; i <= n; ++i) pts.push_back(testutil::random_vec(rng, n, 2.0));
            const double cm = cayley_menger(pts);
            const double oracle = cm_via_gram(pts);
            CHECK(std::abs(cm - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("locate_from_distances examples") {
    std::vector<Vec> anchors = {v2(0, 0), v2(1, 0), v2(0, 1)};
    Vec d(3);

    SUBCASE("right-angle instance") {
        d << std::sqrt(2.0), 1.0, 1.0;
        CHECK((locate_from_distances(anchors, d) - v2(1, 1)).norm() <= 1e-9);
    }
    SUBCASE("zero distance pins the point") {
        d << 0.0, 1.0, 1.0;
        CHECK((locate_from_distances(anchors, d) - v2(0, 0)).norm() <= 1e-9);
    }
    SUBCASE("centroid of the unit simplex in R^3") {
        std::vector<Vec> simplex = {v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
        Vec centroid = v3(0.25, 0.25, 0.25);
        Vec dists(4);
        for (int i = 0; i < 4; ++i) dists[i] = (centroid - simplex[i]).norm();
        CHECK((locate_from_distances(simplex, dists) - centroid).norm() <= 1e-9);
    }
    SUBCASE("degenerate anchors") {
        std::vector<Vec> line = {v2(0, 0), v2(1, 0), v2(2, 0)};
        d << 1, 1, 1;
        CHECK_THROWS_AS(locate_from_distances(line, d), DegenerateAnchors);
    }
    SUBCASE("unrealizable distances") {
        d << 10.0, 1.0, 1.0;
        CHECK_THROWS_AS(locate_from_distances(anchors, d), Unrealizable);
    }
}

TEST_CASE("locate_from_distances agrees with a brute-force grid minimizer") {
    testutil::Rng rng(13);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Vec> anchors = testutil::random_general_position(rng, 2, 1.5);
        Vec truth = testutil::random_vec(rng, 2, 1.5);
        Vec dists(3);
        for (int i = 0; i < 3; ++i) dists[i] = (truth - anchors[i]).norm();
        Vec located = locate_from_distances(anchors, dists);

        // brute force: minimize the squared residual over a coarse grid
        const double R = 4.0, step = 0.05;
        double best = 1e300;
        Vec arg = Vec::Zero(2);
        for (double gx = -R; gx <= R; gx += step)
            for (double gy = -R; gy <= R; gy += step) {
                Vec b = v2(gx, gy);
                double cost = 0.0;
                for (int i = 0; i < 3; ++i) {
                    const double e = (b - anchors[i]).norm() - dists[i];
                    cost += e * e;
                }
                if (cost < best) {
                    best = cost;
                    arg = b;
                }
            }
        CHECK((located - arg).norm() <= step);  // within grid resolution
    }
}

TEST_CASE("fit_motion examples") {
    SUBCASE("src equals dst") {
        std::vector<Vec> src = {v2(0, 0), v2(1, 0), v2(0, 1)};
        Motion m = fit_motion(src, src);
        CHECK(motion_distance(m, Motion::identity(2)) <= 1e-12);
    }
    SUBCASE("quarter turn plus shift") {
        std::vector<Vec> src = {v2(0, 0), v2(1, 0), v2(0, 1)};
        std::vector<Vec> dst = {v2(1, 0), v2(1, 1), v2(0, 0)};
        Motion m = fit_motion(src, dst);
        Mat expect_q(2, 2);
        expect_q << 0, -1, 1, 0;
        CHECK((m.Q() - expect_q).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((m.t() - v2(1, 0)).norm() <= 1e-9);
    }
    SUBCASE("pure translation of the unit simplex") {
        std::vector<Vec> src = {v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
        std::vector<Vec> dst;
        for (const auto& p : src) dst.push_back(p + v3(0, 0, 5));
        Motion m = fit_motion(src, dst);
        CHECK((m.Q() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((m.t() - v3(0, 0, 5)).norm() <= 1e-9);
    }
    SUBCASE("not congruent") {
        std::vector<Vec> src = {v2(0, 0), v2(1, 0), v2(0, 1)};
        std::vector<Vec> dst = {v2(0, 0), v2(2, 0), v2(0, 1)};
        CHECK_THROWS_AS(fit_motion(src, dst), NotCongruent);
    }
    SUBCASE("degenerate anchors") {
        std::vector<Vec> src = {v2(0, 0), v2(1, 0), v2(2, 0)};
        CHECK_THROWS_AS(fit_motion(src, src), DegenerateAnchors);
    }
}

TEST_CASE("fit_motion round-trips random motions") {
    testutil::Rng rng(17);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 20; ++rep) {
            Motion m = testutil::random_motion(rng, n);
            std::vector<Vec> src = testutil::random_general_position(rng, n);
            std::vector<Vec> dst;
            for (const auto& p : src) dst.push_back(m.apply(p));
            Motion fitted = fit_motion(src, dst);
            CHECK(motion_distance(fitted, m) <= 1e-9);
        }
    }
}

TEST_CASE("screw_decompose examples") {
    SUBCASE("pure translation") {
        ScrewDecomposition s = screw_decompose(Motion::translation(v3(1, 2, 3)));
        CHECK(s.planes.empty());
        CHECK(s.reflections.empty());
        CHECK((s.axis_drift - v3(1, 2, 3)).norm() <= 1e-12);
    }
    SUBCASE("identity") {
        ScrewDecomposition s = screw_decompose(Motion::identity(4));
        CHECK(s.planes.empty());
        CHECK(s.reflections.empty());
        CHECK(s.axis_drift.norm() <= 1e-12);
        CHECK(s.center_offset.norm() <= 1e-12);
    }
    SUBCASE("screw in R^3") {
        Motion rot = Motion::plane_rotation(3, M_PI / 2);
        Motion m = compose(Motion::translation(v3(0, 0, 1)), rot);
        ScrewDecomposition s = screw_decompose(m);
        REQUIRE(s.planes.size() == 1);
        CHECK(s.angles[0] == doctest::Approx(M_PI / 2).epsilon(1e-12));
        // plane is span{e1, e2}: projector comparison
        Mat proj = s.planes[0] * s.planes[0].transpose();
        Mat expect = Mat::Zero(3, 3);
        expect(0, 0) = expect(1, 1) = 1;
        CHECK((proj - expect).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((s.axis_drift - v3(0, 0, 1)).norm() <= 1e-10);
    }
}

TEST_CASE("screw decomposition round-trips random motions") {
    testutil::Rng rng(19);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 25; ++rep) {
            Motion m = testutil::random_motion(rng, n);  // improper allowed
            ScrewDecomposition s = screw_decompose(m);
            CHECK(motion_distance(screw_recompose(s, n), m) <= 1e-10);

            // plane orthogonality and drift orthogonality
            for (size_t i = 0; i < s.planes.size(); ++i) {
                CHECK((s.planes[i].transpose() * s.planes[i] - Mat::Identity(2, 2))
                          .cwiseAbs()
                          .maxCoeff() <= 1e-10);
                CHECK((s.planes[i].transpose() * s.axis_drift).norm() <= 1e-10);
                for (size_t j = i + 1; j < s.planes.size(); ++j)
                    CHECK((s.planes[i].transpose() * s.planes[j]).cwiseAbs().maxCoeff() <=
                          1e-10);
            }
            // angles sorted, in (0, pi]
            for (size_t i = 0; i < s.angles.size(); ++i) {
                CHECK(s.angles[i] > 0.0);
                CHECK(s.angles[i] <= M_PI + 1e-15);
                if (i) CHECK(s.angles[i] >= s.angles[i - 1]);
            }
        }
    }
}

TEST_CASE("simultaneous_diagonalize examples") {
    SUBCASE("identity pair") {
        CommutingPairDiag d = simultaneous_diagonalize(Mat::Identity(3, 3),
                                                       Mat::Identity(3, 3));
        CHECK((d.eigsA - CVec::Ones(3)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((d.eigsB - CVec::Ones(3)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("two plane rotations share eigenvectors") {
        Mat A = Motion::plane_rotation(2, M_PI / 3).Q();
        Mat B = Motion::plane_rotation(2, M_PI / 4).Q();
        CommutingPairDiag d = simultaneous_diagonalize(A, B);
        auto has = [](const CVec& eigs, std::complex<double> want) {
            for (int i = 0; i < eigs.size(); ++i)
                if (std::abs(eigs[i] - want) <= 1e-9) return true;
            return false;
        };
        CHECK(has(d.eigsA, std::polar(1.0, M_PI / 3)));
        CHECK(has(d.eigsA, std::polar(1.0, -M_PI / 3)));
        CHECK(has(d.eigsB, std::polar(1.0, M_PI / 4)));
        CHECK(has(d.eigsB, std::polar(1.0, -M_PI / 4)));
    }
    SUBCASE("block rotation against a reflection") {
        Mat A = Motion::plane_rotation(3, 0.7).Q();
        Mat B = Mat::Identity(3, 3);
        B(2, 2) = -1.0;
        CommutingPairDiag d = simultaneous_diagonalize(A, B);
        bool found = false;
        for (int i = 0; i < 3; ++i)
            if (std::abs(d.eigsB[i] - std::complex<double>(-1.0, 0.0)) <= 1e-9)
                found = true;
        CHECK(found);
    }
    SUBCASE("non-commuting pair rejected") {
        Mat A = Motion::plane_rotation(3, 0.5).Q();
        Mat B = Mat::Identity(3, 3);
        // rotation in the e2-e3 plane
        B(1, 1) = std::cos(0.5);
        B(1, 2) = -std::sin(0.5);
        B(2, 1) = std::sin(0.5);
        B(2, 2) = std::cos(0.5);
        CHECK_THROWS_AS(simultaneous_diagonalize(A, B), NotCommuting);
    }
}

TEST_CASE("simultaneous_diagonalize reconstruction residuals") {
    testutil::Rng rng(23);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 10; ++rep) {
            // commuting pair: common conjugation of two block-diagonal parts
            Mat R = testutil::random_orthogonal(rng, n);
            Mat Da = Mat::Identity(n, n), Db = Mat::Identity(n, n);
            for (int p = 0; p + 1 < n; p += 2) {
                const double a = testutil::uniform(rng, -3.0, 3.0);
                const double b = testutil::uniform(rng, -3.0, 3.0);
                Da.block(p, p, 2, 2) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
                Db.block(p, p, 2, 2) << std::cos(b), -std::sin(b), std::sin(b), std::cos(b);
            }
            Mat A = polar_orthogonal(R * Da * R.transpose());
            Mat B = polar_orthogonal(R * Db * R.transpose());
            CommutingPairDiag d = simultaneous_diagonalize(A, B, 1);

            const int m = static_cast<int>(d.P.rows());
            CMat Pa = d.P.adjoint() * A.cast<std::complex<double>>() * d.P;
            CMat Pb = d.P.adjoint() * B.cast<std::complex<double>>() * d.P;
            CHECK((d.P.adjoint() * d.P - CMat::Identity(m, m)).cwiseAbs().maxCoeff() <=
                  1e-10);
            CHECK((Pa - CMat(d.eigsA.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-9);
            CHECK((Pb - CMat(d.eigsB.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-9);
            for (int i = 0; i < m; ++i) {
                CHECK(std::abs(std::abs(d.eigsA[i]) - 1.0) <= 1e-10);
                CHECK(std::abs(std::abs(d.eigsB[i]) - 1.0) <= 1e-10);
            }
        }
    }
}

TEST_CASE("distance_to_fixed_subspace") {
    Mat plane(3, 2);
    plane << 1, 0, 0, 1, 0, 0;

    SUBCASE("point on the axis") {
        CHECK(distance_to_fixed_subspace(plane, Vec::Zero(3), v3(0, 0, 4)) <= 1e-15);
    }
    SUBCASE("3-4-5 projection") {
        CHECK(distance_to_fixed_subspace(plane, Vec::Zero(3), v3(3, 4, 7)) ==
              doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("unit offset from the center") {
        Vec c = v3(0.5, -1, 2);
        CHECK(distance_to_fixed_subspace(plane, c, c + v3(1, 0, 0)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("non-orthonormal frame rejected") {
        Mat bad(3, 2);
        bad << 1, 1, 0, 1, 0, 0;
        CHECK_THROWS_AS(distance_to_fixed_subspace(bad, Vec::Zero(3), v3(1, 1, 1)),
                        InvalidInput);
    }
}
