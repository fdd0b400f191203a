#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bislant {

/// One residual record: a named identity evaluated at a sample point.
struct IdentityCheck {
    std::string suite;
    std::string name;    // which instance (probe fields, pair indices, ...)
    std::string anchor;  // the identity being checked, in formula form
    Eigen::VectorXd point;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string skip_reason;  // set iff skipped
    std::string note;         // optional adjudication note

    static IdentityCheck make(std::string suite, std::string name, std::string anchor,
                              Eigen::VectorXd point, double lhs, double rhs, double residual,
                              double threshold) {
        IdentityCheck c;
        c.suite = std::move(suite);
        c.name = std::move(name);
        c.anchor = std::move(anchor);
        c.point = std::move(point);
        c.lhs = lhs;
        c.rhs = rhs;
        c.residual = residual;
        c.threshold = threshold;
        c.pass = residual < threshold;
        return c;
    }

    static IdentityCheck skip(std::string suite, std::string name, std::string anchor,
                              Eigen::VectorXd point, std::string reason) {
        IdentityCheck c;
        c.suite = std::move(suite);
        c.name = std::move(name);
        c.anchor = std::move(anchor);
        c.point = std::move(point);
        c.pass = true;
        c.skipped = true;
        c.skip_reason = std::move(reason);
        return c;
    }
};

struct SuiteResult {
    std::string suite;
    std::vector<IdentityCheck> checks;
    std::optional<std::string> not_run_reason;  // whole suite inapplicable

    int skipped_count() const {
        int n = 0;
        for (const auto& c : checks) n += c.skipped ? 1 : 0;
        return n;
    }
    double max_residual() const {
        double r = 0.0;
        for (const auto& c : checks)
            if (!c.skipped) r = std::max(r, c.residual);
        return r;
    }
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Claim adjudication record. Claims are verification targets only; they
/// never alter pass/fail of the identity suites.
struct ClaimComparison {
    std::string subject;   // e.g. "slant D2", "warped f", "lemma4.1 coefficient"
    std::string claimed;
    std::string computed;
    bool match = false;
    double deviation = 0.0;
};

namespace tol {
// linear-algebra identities (exact constructions)
constexpr double kReconstruction = 1e-10;   // F(Jx) = J(Tx) + N(Wx)
constexpr double kGramSymmetry = 1e-10;     // gram T = T^T gram
constexpr double kComposition = 1e-10;      // T^2 + BW = I, WT + CW = 0
constexpr double kNormSplit = 1e-10;        // |Tx|^2 + |wx|^2 = |x|^2
constexpr double kEq28 = 1e-8;              // g(TX,TY) = cos^2(theta) g(X,Y), ...
constexpr double kEq29 = 1e-8;              // Bw X = sin^2(theta) X, Cw X = -w T X
constexpr double kProjector = 1e-10;        // P^2 = P, g-self-adjoint, P1 + P2 = I
constexpr double kEq33 = 1e-10;             // FX = T1 X + T2 X + w X
constexpr double kInvariance = 1e-8;        // T(D_i) in D_i
constexpr double kAxiomB = 1e-8;            // g(F D1, D2) = 0
constexpr double kGauss = 1e-9;             // H = J Gamma + N sigma
constexpr double kShapeDuality = 1e-10;     // g(A_N X, Y) = g(sigma(X,Y), N)
constexpr double kWeingarten = 1e-5;        // differenced
constexpr double kChristoffelAgree = 1e-5;  // two constructions
constexpr double kLemma32 = 1e-6;
constexpr double kLemma32Degenerate = 1e-6;  // |sin^2 t2 - sin^2 t1| below -> skip
constexpr double kCor33Agree = 1e-8;
constexpr double kIntegrability = 1e-8;
constexpr double kWarpCross = 1e-9;
constexpr double kWarpBaseDep = 1e-6;
constexpr double kWarpConformal = 1e-8;
constexpr double kWarpClaimVariance = 1e-10;
constexpr double kWarpTrivial = 1e-10;
constexpr double kOneill = 1e-5;
constexpr double kLemma4x = 1e-5;
constexpr double kAngleGate = 1e-6;          // slant angle within this of 0 or pi/2 -> skip
constexpr double kEq51 = 1e-5;
constexpr double kCaseAgree = 1e-8;
constexpr double kMuFiber = 1e-8;            // W(mu) = 0
constexpr double kFoliation = 1e-5;
constexpr double kSlantSnap = 1e-9;          // exact 0 / pi/2 snapping
constexpr double kSlantSpread = 1e-6;        // pointwise-slant classification
constexpr double kSlantClaim = 1e-9;         // cos^2 comparison
constexpr double kTSquare = 1e-8;            // T|_D^2 = cos^2(theta) I
constexpr double kFiniteDiffStep = 1e-5;
}  // namespace tol

}  // namespace bislant
