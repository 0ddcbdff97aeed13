#pragma once

#include "sdc/detect.hpp"
#include "sdc/jointdiag.hpp"
#include "sdc/sdp.hpp"

namespace sdc {

struct StageTimings {
    double detect_s = 0;     // feasibility / pencil detection
    double sqrt_s = 0;       // PD square root + congruence
    double jointdiag_s = 0;  // Jacobi stage
    double total_s = 0;
};

struct SolveOutcome {
    Verdict verdict = Verdict::NOT_SDC;
    std::optional<CongruenceResult> result;  // present on SDC
    DetectReport detect;
    FeasibilityOutcome feasibility;
    std::optional<JointDiagResult> jointdiag;
    StageTimings timings;
};

/// The full pipeline: decide SDC (SDP feasibility by default, the pencil
/// detector on request, both with a consistency check), then on the positive
/// side transform by Q = sqrt(X), jointly diagonalize {Q C_i Q} by a unitary
/// V, and return P = Q V with the real diagonals and the backward error.
/// route = BOTH raises VerdictConflictError when the two detectors disagree.
SolveOutcome solve(const MatrixFamily& f, const Tolerances& tol = {}, Route route = Route::SDP);

/// Detection only (no transform construction).  route = BOTH cross-checks the
/// two detectors and throws VerdictConflictError on disagreement.
DetectReport detect(const MatrixFamily& f, const Tolerances& tol = {}, Route route = Route::SDP);

struct ConstructedFamily {
    MatrixFamily family;
    Matrix p;                                    // ground-truth transform
    std::vector<std::vector<double>> diagonals;  // ground-truth D_i
};

/// The benchmark protocol: C_i = P* D_i P with P entries and D_i diagonals
/// uniform on [0, 1).  `complex_entries` extends the draw to complex P for
/// test purposes.  Deterministic per seed; P is redrawn while its condition
/// is out of range.
ConstructedFamily random_sdc_family(int n, int m, std::uint64_t seed,
                                    bool complex_entries = false);

}  // namespace sdc
