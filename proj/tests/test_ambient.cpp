#include "bislant/ambient.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bislant;

TEST_CASE("signature structures for both example ambients") {
    const ProductStructure f4 = make_signature_structure({1, 1, -1, -1});
    const ProductStructure f6 = make_signature_structure({-1, -1, -1, 1, 1, 1});
    for (const auto* s : {&f4, &f6}) {
        const StructureReport rep = validate_structure(s->F);
        CHECK(rep.valid);
        CHECK(rep.involution_residual == 0.0);  // exact for +-1 diagonals
        CHECK(rep.isometry_residual == 0.0);
        CHECK_FALSE(rep.trivial);
    }
}

TEST_CASE("all-equal signature is rejected") {
    CHECK_THROWS_AS(make_signature_structure({1, 1, 1, 1}), StructureError);
    CHECK_THROWS_AS(make_signature_structure({-1, -1}), StructureError);
}

TEST_CASE("identity matrix flagged trivial") {
    const StructureReport rep = validate_structure(Eigen::MatrixXd::Identity(3, 3));
    CHECK_FALSE(rep.valid);
    CHECK(rep.trivial);
}

TEST_CASE("off-axis reflection is a valid structure") {
    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0;
    // direct matrix-product oracle
    CHECK((swap * swap - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
    const StructureReport rep = validate_structure(swap);
    CHECK(rep.valid);
    const ProductStructure ps = make_matrix_structure(swap);
    CHECK(ps.signature_mask == false);
}

TEST_CASE("apply_structure masks signs") {
    const ProductStructure f = make_signature_structure({1, 1, -1, -1});
    Eigen::VectorXd v(4);
    v << 1, 0, 1, 0;
    Eigen::VectorXd fv = apply_structure(f, v);
    CHECK(fv(0) == 1.0);
    CHECK(fv(2) == -1.0);
    CHECK(apply_structure(f, Eigen::VectorXd::Zero(4)).norm() == 0.0);
    CHECK_THROWS_AS(apply_structure(f, Eigen::VectorXd::Zero(3)), StructureError);
}

TEST_CASE("example tangent vector under the R^6 structure") {
    // v1 at (u,v,w) = (0,1,2) for the helical fixture
    const ProductStructure f = make_signature_structure({-1, -1, -1, 1, 1, 1});
    Eigen::VectorXd v1(6);
    v1 << 0, 1, 0, 0, 2, 0;
    Eigen::VectorXd fv = apply_structure(f, v1);
    Eigen::VectorXd expect(6);
    expect << 0, -1, 0, 0, 2, 0;
    CHECK((fv - expect).norm() == 0.0);
}

TEST_CASE("metric compatibility over random vectors") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    const ProductStructure sig = make_signature_structure({1, -1, 1, -1, 1});
    Eigen::MatrixXd rot(2, 2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    // reflection across a rotated axis: R(a) diag(1,-1) R(-a)
    rot << c * c - s * s, 2 * c * s, 2 * c * s, s * s - c * c;
    const ProductStructure refl = make_matrix_structure(rot);
    for (int i = 0; i < 200; ++i) {
        {
            Eigen::VectorXd v(5), w(5);
            for (int j = 0; j < 5; ++j) {
                v(j) = g(rng);
                w(j) = g(rng);
            }
            const double lhs = apply_structure(sig, v).dot(apply_structure(sig, w));
            CHECK(std::abs(lhs - v.dot(w)) < 1e-12 * (1 + v.norm() * w.norm()));
            CHECK((apply_structure(sig, apply_structure(sig, v)) - v).norm() == 0.0);
        }
        {
            Eigen::VectorXd v(2), w(2);
            v << g(rng), g(rng);
            w << g(rng), g(rng);
            const double lhs = apply_structure(refl, v).dot(apply_structure(refl, w));
            CHECK(std::abs(lhs - v.dot(w)) < 1e-12 * (1 + v.norm() * w.norm()));
            CHECK((apply_structure(refl, apply_structure(refl, v)) - v).norm() <
                  1e-13 * (1 + v.norm()));
        }
    }
}
