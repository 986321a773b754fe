#pragma once

#include "cocyclelab/cocycle.hpp"
#include "cocyclelab/mat2.hpp"

#include <memory>
#include <vector>

namespace cocyclelab {

// Hypothesis flags and conclusion residual for a block sequence A_1..A_n:
//   |det A_j| <= 1,  min ||A_j|| >= gamma > n,
//   max [log||A_{j+1}|| + log||A_j|| - log||A_{j+1} A_j||] < (1/2) log gamma
//   =>  |log||A_n...A_1|| + sum_{j=2}^{n-1} log||A_j||
//        - sum_{j=1}^{n-1} log||A_{j+1} A_j|||  <  C n / gamma.
// gamma and the residual routinely leave double range for cocycle blocks, so
// the log-domain fields are authoritative; the plain doubles saturate.
struct APReport {
    int n_blocks = 0;
    double gamma_bound = 0.0;      // min_j ||A_j||, +inf when out of range
    double log_gamma = 0.0;
    bool det_ok = false;           // max |det A_j| <= 1 + 1e-12
    bool gap_ok = false;           // pairwise-gap hypothesis
    bool size_ok = false;          // gamma > n
    double lhs_residual = 0.0;     // 0 when below double underflow
    double log_lhs_residual = 0.0; // -inf for an exactly telescoping suite
    double bound_value = 0.0;      // C_test * n / gamma
    double log_bound = 0.0;
    double C_test = 0.0;

    bool hypotheses_ok() const { return det_ok && gap_ok && size_ok; }
    bool conclusion_ok() const { return log_lhs_residual <= log_bound; }
};

// Norms, pair products and the long product are evaluated in extended
// precision on the given matrices, so the residual is meaningful down to
// the scale of the AP bound. Violated hypotheses set flags, not errors.
APReport ap_check(const std::vector<ScaledMat>& blocks, double C_test = 10.0);

// Blocks A_j = M_n(x + (j-1) n omega, E), j = 1..m, in the requested gauge.
std::vector<ScaledMat> ap_blocks(const JacobiModel& model, double x, double E,
                                 long long block_len, int num_blocks,
                                 Gauge gauge = Gauge::unimodular);

// Cocycle blocks evaluated end to end in extended precision. Double-precision
// blocks lose their determinant once the block norm exceeds ~e^17 (the stored
// matrix is numerically rank one), so the det telemetry and the residual of
// ap_check are only meaningful when the factors, their determinants and the
// long product never round-trip through doubles. as_scaled_mats() gives a
// double snapshot for reporting; ap_check(PreciseBlockSet) stays in extended
// precision throughout.
class PreciseBlockSet {
  public:
    PreciseBlockSet(const JacobiModel& model, double x, double E, long long block_len,
                    int num_blocks, Gauge gauge = Gauge::unimodular);
    PreciseBlockSet(PreciseBlockSet&&) noexcept;
    PreciseBlockSet& operator=(PreciseBlockSet&&) noexcept;
    ~PreciseBlockSet();

    int size() const;
    long long block_len() const;
    std::vector<ScaledMat> as_scaled_mats() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    friend APReport ap_check(const PreciseBlockSet&, double);
};

APReport ap_check(const PreciseBlockSet& blocks, double C_test = 10.0);

}  // namespace cocyclelab
