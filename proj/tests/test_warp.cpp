#include "bislant/warp.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>

using namespace bislant;
using bislant::testutil::fixture_spec;
using bislant::testutil::pt;

namespace {

void check_all_pass(const std::vector<IdentityCheck>& checks, double bound,
                    int* executed = nullptr) {
    int run = 0;
    for (const auto& c : checks) {
        CAPTURE(c.suite);
        CAPTURE(c.name);
        CAPTURE(c.residual);
        CHECK(c.pass);
        if (!c.skipped) {
            ++run;
            CHECK(c.residual < bound);
        }
    }
    if (executed) *executed = run;
}

}  // namespace

TEST_CASE("warping recovery on the helix fixture: f ~ sqrt(v^2+w^2)") {
    const ImmersionSpec spec = fixture_spec("ex6.2");
    const auto points = sample_domain(spec, 32, 42).points;
    const WarpedReport rep = recover_warping(spec, points);
    CHECK(rep.aligned);
    CHECK(rep.detected);
    CHECK(rep.verdict == "warped");
    CHECK_FALSE(rep.trivial);
    CHECK(rep.cross_residual < 1e-9);
    CHECK(rep.base_dep_residual < 1e-6);
    CHECK(rep.fiber_conformal_residual < 1e-8);
    CHECK(rep.claim_match);
    CHECK(rep.claim_ratio_variance < 1e-10);
    // recovered f, normalized at the reference point, against the closed form
    const double ref = std::sqrt(points[0](1) * points[0](1) + points[0](2) * points[0](2));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double expect = std::sqrt(points[i](1) * points[i](1) +
                                        points[i](2) * points[i](2)) / ref;
        CHECK(rep.f_samples[i] == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("warping recovery on the cone fixture reports the base cross term") {
    const ImmersionSpec spec = fixture_spec("ex6.1");
    const auto points = sample_domain(spec, 32, 42).points;
    const WarpedReport rep = recover_warping(spec, points);
    CHECK(rep.detected);
    CHECK(rep.claim_match);  // f ~ sqrt(w^2(1+u^2))
    const double ref2 = points[0](2) * points[0](2) * (1.0 + points[0](0) * points[0](0));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double f2 = points[i](2) * points[i](2) * (1.0 + points[i](0) * points[i](0));
        CHECK(rep.f_samples[i] * rep.f_samples[i] == doctest::Approx(f2 / ref2).epsilon(1e-9));
    }
    // measured base metric carries the du,dw cross entry u*w
    CHECK(rep.note.find("g(du, dw)") != std::string::npos);
    REQUIRE(rep.base_block_samples.size() == points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double uw = points[i](0) * points[i](2);
        CHECK(rep.base_block_samples[i](0, 1) == doctest::Approx(uw).epsilon(1e-10));
        CHECK(rep.base_block_samples[i](0, 0) ==
              doctest::Approx(points[i](2) * points[i](2)).epsilon(1e-10));
    }
}

TEST_CASE("product metric is reported as a trivial warped product") {
    const ImmersionSpec spec = fixture_spec("toy_cr");
    const auto points = sample_domain(spec, 8, 42).points;
    const WarpedReport rep = recover_warping(spec, points);
    CHECK(rep.detected);
    CHECK(rep.trivial);
    CHECK(rep.verdict == "trivial warped product");
}

TEST_CASE("perturbed metric is rejected: factor varies along the fiber") {
    const ImmersionSpec spec = fixture_spec("toy_perturbed");
    const auto points = sample_domain(spec, 16, 42).points;
    const WarpedReport rep = recover_warping(spec, points);
    CHECK(rep.aligned);
    CHECK_FALSE(rep.detected);
    CHECK(rep.verdict.find("not warped") != std::string::npos);
}

TEST_CASE("non-aligned distributions get no warped verdict") {
    const std::string text =
        "ambient 4 signature + + - -\n"
        "chart u v\n"
        "domain u 0.5 2 ; v 0.5 2\n"
        "map u , v , 0 , 0\n"
        "dist D1 = du + dv\n"
        "dist D2 = du - dv\n"
        "claim warped base D1 fiber D2 f 1\n";
    const ImmersionSpec spec = load_spec(text);
    const auto points = sample_domain(spec, 8, 42).points;
    const WarpedReport rep = recover_warping(spec, points);
    CHECK_FALSE(rep.aligned);
    CHECK_FALSE(rep.detected);
}

TEST_CASE("O'Neill relation on both fixtures, with the hand value") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        WarpedReport rep = recover_warping(spec, points);
        const auto checks = check_oneill(spec, points, &rep);
        int run = 0;
        check_all_pass(checks, 1e-5, &run);
        CHECK(run > 0);
        CHECK(rep.oneill_residual >= 0.0);
        CHECK(rep.oneill_residual < 1e-5);
    }
    // X(ln f) = v/(v^2+w^2) = 1/5 at (0,1,2) on the helix fixture
    const ImmersionSpec spec = fixture_spec("ex6.2");
    const auto roles = warp_roles(spec);
    REQUIRE(roles.has_value());
    const Jet2 j = roles->mu->eval_jet2(pt({0.0, 1.0, 2.0}));
    CHECK(j.grad(1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("trivial product: O'Neill reduces to nabla_X Z = 0") {
    const ImmersionSpec spec = fixture_spec("toy_cr");
    const auto points = sample_domain(spec, 4, 42).points;
    const auto checks = check_oneill(spec, points, nullptr);
    for (const auto& c : checks) {
        CHECK(c.pass);
        if (!c.skipped) CHECK(c.lhs == 0.0);  // |nabla_X Z| vanishes identically
    }
}

TEST_CASE("lemma 4.1 with the corrected coefficient on both fixtures") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        int run = 0;
        check_all_pass(check_lemma_4_1(spec, points, 8, 42), 1e-5, &run);
        CHECK(run > 0);
    }
}

TEST_CASE("lemma 4.1 hand instance on the cone fixture at (2,0,1)") {
    // LHS = 24 w^2/25, corrected RHS = -(1/2) sin(2 t2) X(t2) g(Z,W) = 24/25
    const ImmersionSpec spec = fixture_spec("ex6.1");
    const auto checks = check_lemma_4_1(spec, {pt({2.0, 0.0, 1.0})}, 8, 42);
    bool found = false;
    for (const auto& c : checks) {
        if (c.skipped || c.name.find("X=du Z=dv W=dv") == std::string::npos) continue;
        found = true;
        CHECK(c.lhs == doctest::Approx(24.0 / 25.0).epsilon(1e-7));
        CHECK(c.rhs == doctest::Approx(24.0 / 25.0).epsilon(1e-7));
        // the printed coefficient (without the 1/2) would demand twice that
        CHECK(std::abs(2.0 * c.rhs - c.lhs) > 0.5);
    }
    CHECK(found);
}

TEST_CASE("lemma 4.2 with the corrected coefficient; hand instance at (0,1,2)") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        int run = 0;
        check_all_pass(check_lemma_4_2(spec, points, 8, 42), 1e-5, &run);
        CHECK(run > 0);
    }
    // helix fixture: base D2, fiber D1; X = dv, Z = W = du at (0,1,2):
    // LHS = -16/5, corrected RHS = -tan(tf) X(tf) g(Tf Z, Z) = -16/5
    const ImmersionSpec spec = fixture_spec("ex6.2");
    const auto checks = check_lemma_4_2(spec, {pt({0.0, 1.0, 2.0})}, 8, 42);
    bool found = false;
    for (const auto& c : checks) {
        if (c.skipped || c.name.find("X=dv Z=du W=du") == std::string::npos) continue;
        found = true;
        CHECK(c.lhs == doctest::Approx(-3.2).epsilon(1e-7));
        CHECK(c.rhs == doctest::Approx(-3.2).epsilon(1e-7));
    }
    CHECK(found);
}

TEST_CASE("lemma 4.3 (i), (ii) and the intermediate identity") {
    for (const char* name : {"ex6.1", "ex6.2", "toy_cr"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        int run = 0;
        check_all_pass(check_lemma_4_3(spec, points, 8, 42), 1e-5, &run);
        CHECK(run > 0);
    }
}

TEST_CASE("theorem 4.4 on both fixtures; hand instance at (2,0,1)") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        int run = 0;
        check_all_pass(check_theorem_4_4(spec, points, 8, 42), 1e-5, &run);
        CHECK(run > 0);
    }
    // cone fixture: both sides equal 32/25 at (2,0,1) for X=du, Z=W=dv
    const ImmersionSpec spec = fixture_spec("ex6.1");
    const auto checks = check_theorem_4_4(spec, {pt({2.0, 0.0, 1.0})}, 8, 42);
    bool found = false;
    for (const auto& c : checks) {
        if (c.skipped || c.name.find("X=du Z=dv W=dv") == std::string::npos) continue;
        found = true;
        CHECK(c.lhs == doctest::Approx(1.28).epsilon(1e-9));
        CHECK(c.rhs == doctest::Approx(1.28).epsilon(1e-9));
    }
    CHECK(found);
}

TEST_CASE("characterization vector identity and W(mu) = 0") {
    for (const char* name : {"ex6.1", "ex6.2", "toy_cr"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        int run = 0;
        check_all_pass(check_characterization(spec, points, 8, 42), 1e-5, &run);
        CHECK(run > 0);
    }
}

TEST_CASE("characterization requires a mu source") {
    const ImmersionSpec spec = fixture_spec("toy_nonintegrable");
    const auto points = sample_domain(spec, 4, 42).points;
    CHECK_THROWS_WITH_AS(check_characterization(spec, points, 8, 42),
                         doctest::Contains("requires mu"), SpecError);
}

TEST_CASE("special cases select by computed classification") {
    {
        // cone fixture: theta1 = 0 computed, theta2 proper: case 1 runs
        const ImmersionSpec spec = fixture_spec("ex6.1");
        const auto points = sample_domain(spec, 12, 42).points;
        const auto checks = check_special_cases(spec, points, 8, 42);
        int case1 = 0;
        for (const auto& c : checks) {
            CHECK(c.pass);
            if (!c.skipped && c.name.find("case1") == 0) ++case1;
            if (c.skipped)
                CHECK((c.name == "case2" || c.name == "case3"));
        }
        CHECK(case1 > 0);
    }
    {
        // proper bi-slant helix fixture: all three reductions inapplicable
        const ImmersionSpec spec = fixture_spec("ex6.2");
        const auto points = sample_domain(spec, 12, 42).points;
        const auto checks = check_special_cases(spec, points, 8, 42);
        REQUIRE(checks.size() == 3);
        for (const auto& c : checks) CHECK(c.skipped);
    }
    {
        // CR toy: case 3 with constant mu: 0 = 0
        const ImmersionSpec spec = fixture_spec("toy_cr");
        const auto points = sample_domain(spec, 8, 42).points;
        const auto checks = check_special_cases(spec, points, 8, 42);
        int case3 = 0;
        for (const auto& c : checks) {
            CHECK(c.pass);
            if (!c.skipped && c.name.find("case3") == 0) {
                ++case3;
                CHECK(c.lhs == doctest::Approx(0.0));
                CHECK(c.rhs == doctest::Approx(0.0));
            }
        }
        CHECK(case3 > 0);
    }
}

TEST_CASE("hemi-slant warped product exercises the case-2 reduction") {
    // circle fiber inside an anti-invariant plane, linear warping f = 1+u/2,
    // base direction at angle pi/6 across the eigensplit:
    //   cos(theta_base) = |cos(pi/3)| / (1 + 2 f'^2) = (1/2)/(3/2) = 1/3 (constant)
    const std::string text =
        "ambient 6 signature + + + - - -\n"
        "chart u t\n"
        "domain u 0.5 2.0 ; t 0.2 6.0\n"
        "map (1+u/2)*cos(t) , (1+u/2)*sin(t) , 0.8660254037844387*u , "
        "(1+u/2)*cos(t) , (1+u/2)*sin(t) , 0.5*u\n"
        "dist D1 = du\n"
        "dist D2 = dt\n"
        "claim slant D1 acos(1/3)\n"
        "claim slant D2 acos(0)\n"
        "claim warped base D1 fiber D2 f 1+u/2\n";
    const ImmersionSpec spec = load_spec(text);
    const auto points = sample_domain(spec, 16, 42).points;

    const AxiomReport ax = check_bislant_axioms(spec, points, 8, 42);
    CHECK(ax.pass());
    CHECK(ax.theta1.classification == DistClass::SlantConstant);
    CHECK(std::cos(ax.theta1.theta_min) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(ax.theta2.classification == DistClass::AntiInvariant);

    const WarpedReport rep = recover_warping(spec, points);
    CHECK(rep.detected);
    CHECK(rep.claim_match);
    CHECK_FALSE(rep.trivial);

    const auto cases = check_special_cases(spec, points, 8, 42);
    int case2 = 0;
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CHECK(c.pass);
        if (!c.skipped && c.name.find("case2") == 0) ++case2;
        if (c.skipped) CHECK((c.name == "case1" || c.name == "case3"));
    }
    CHECK(case2 > 0);

    int run = 0;
    check_all_pass(check_characterization(spec, points, 8, 42), 1e-5, &run);
    CHECK(run > 0);
    check_all_pass(check_theorem_4_4(spec, points, 8, 42), 1e-5, nullptr);
    check_all_pass(check_foliation_geometry(spec, points, 8, 42, nullptr), 1e-5, nullptr);
    check_all_pass(check_oneill(spec, points, nullptr), 1e-5, nullptr);
    // the sin(2 theta_2)-derivative lemma is gated at theta_2 = pi/2
    for (const auto& c : check_lemma_4_1(spec, points, 8, 42)) CHECK(c.skipped);
}

TEST_CASE("foliation geometry passes on fixtures, fails on the perturbed toy") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        WarpedReport rep = recover_warping(spec, points);
        int run = 0;
        check_all_pass(check_foliation_geometry(spec, points, 8, 42, &rep), 1e-5, &run);
        CHECK(run > 0);
        CHECK(rep.base_geodesic_residual < 1e-5);
        CHECK(rep.fiber_umbilic_residual < 1e-5);
        CHECK(rep.mu_fiber_residual < 1e-8);
    }
    {
        const ImmersionSpec spec = fixture_spec("toy_perturbed");
        const auto points = sample_domain(spec, 16, 42).points;
        WarpedReport rep = recover_warping(spec, points);
        const auto checks = check_foliation_geometry(spec, points, 8, 42, &rep);
        bool umbilic_failed = false;
        for (const auto& c : checks) {
            if (c.name.find("geodesic") == 0) CHECK(c.pass);   // (a) still holds
            if (c.name.find("mu") == 0) CHECK(c.pass);          // (c) still holds
            if (c.name.find("umbilic") == 0 && !c.pass) umbilic_failed = true;
        }
        CHECK(umbilic_failed);  // (b) is the one that breaks
        CHECK(rep.fiber_umbilic_residual > 0.01);
    }
}

TEST_CASE("printed lemma coefficients are adjudicated as mismatches") {
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 16, 42).points;
        const auto claims = lemma_coefficient_adjudication(spec, points, 8, 42);
        REQUIRE(claims.size() == 2);
        for (const auto& c : claims) {
            CAPTURE(c.subject);
            CHECK_FALSE(c.match);  // factor-2 misprint
            CHECK(c.computed.find("1/2") != std::string::npos);
        }
    }
    // constant fiber slant: the coefficient cannot be exercised
    const ImmersionSpec spec = fixture_spec("toy_cr");
    const auto points = sample_domain(spec, 8, 42).points;
    const auto claims = lemma_coefficient_adjudication(spec, points, 8, 42);
    REQUIRE(claims.size() == 2);
    for (const auto& c : claims) CHECK(c.match);
}

TEST_CASE("internal consistency: characterization against theorem 4.4") {
    // on a verified warped product the vector identity and the inner-product
    // identity certify each other
    for (const char* name : {"ex6.1", "ex6.2"}) {
        CAPTURE(name);
        const ImmersionSpec spec = fixture_spec(name);
        const auto points = sample_domain(spec, 12, 42).points;
        const bool c51 = [&] {
            for (const auto& c : check_characterization(spec, points, 8, 42))
                if (!c.pass) return false;
            return true;
        }();
        const bool c44 = [&] {
            for (const auto& c : check_theorem_4_4(spec, points, 8, 42))
                if (!c.pass) return false;
            return true;
        }();
        CHECK(c51 == c44);
        CHECK(c51);
    }
}

TEST_CASE("identity sides are homogeneous in the probe fields") {
    // rescaling the rank-1 fiber field by 5 scales both sides of the
    // trilinear identity by 25 and leaves the normalized residual passing
    const std::string base_text(fixtures::find("ex6.1")->text);
    std::string scaled_text = base_text;
    const auto pos = scaled_text.find("dist D2 = dv");
    REQUIRE(pos != std::string::npos);
    scaled_text.replace(pos, std::string("dist D2 = dv").size(), "dist D2 = 5*dv");
    const ImmersionSpec a = load_spec(base_text);
    const ImmersionSpec b = load_spec(scaled_text);
    const auto points = sample_domain(a, 8, 42).points;
    const auto ca = check_theorem_4_4(a, points, 8, 42);
    const auto cb = check_theorem_4_4(b, points, 8, 42);
    REQUIRE(ca.size() == cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].skipped) continue;
        CHECK(cb[i].pass);
        CHECK(std::abs(cb[i].lhs - 25.0 * ca[i].lhs) < 1e-8 * (1.0 + std::abs(cb[i].lhs)));
        CHECK(std::abs(cb[i].rhs - 25.0 * ca[i].rhs) < 1e-8 * (1.0 + std::abs(cb[i].rhs)));
    }
}
