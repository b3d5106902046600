#pragma once

/* Shared basics: matrix type, norms, errors, seeded RNG helpers, reports. */

#include <Eigen/Dense>
#include <complex>
#include <deque>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgt {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using cplx = std::complex<double>;

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/* Error taxonomy.  Each failure mode has its own exception type so callers
   (and the CLI) can report the canonical name. */
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};
#define HGT_ERROR(NAME)                                        \
  struct NAME : Error {                                        \
    explicit NAME(const std::string& msg) : Error(#NAME, msg) {} \
  };
HGT_ERROR(TagMismatch)
HGT_ERROR(NotComposable)
HGT_ERROR(BranchCut)
HGT_ERROR(BoundaryTooClose)
HGT_ERROR(CoverGap)
HGT_ERROR(PieceMismatch)
HGT_ERROR(MissingAction)
HGT_ERROR(MissingOverlapData)
HGT_ERROR(CoverMismatch)
HGT_ERROR(NotARefinement)
HGT_ERROR(KindMismatch)
HGT_ERROR(BareCocycleInvalid)
HGT_ERROR(CocycleInvalid)
HGT_ERROR(NotReconstructed)
HGT_ERROR(SourceTargetMismatch)
#undef HGT_ERROR

/* Deterministic RNG.  All sampling flows through this so reports are
   reproducible for a given seed. */
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  int uniform_int(int a, int b) {  // inclusive
    return std::uniform_int_distribution<int>(a, b)(gen);
  }
};

/* One verified condition in a report. */
struct ConditionResult {
  std::string label;      // e.g. "eq:transconnco"
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/* conditions is a deque so references returned by add() stay valid while
   further conditions are added */
struct Report {
  std::deque<ConditionResult> conditions;
  bool all_pass() const {
    for (auto& c : conditions)
      if (!c.pass) return false;
    return true;
  }
  ConditionResult& add(const std::string& label, double threshold) {
    conditions.push_back({label, 0.0, threshold, true});
    return conditions.back();
  }
  void record(ConditionResult& c, double residual) {
    if (residual > c.max_residual) c.max_residual = residual;
    if (c.max_residual > c.threshold) c.pass = false;
  }
  void merge(const Report& other) {
    conditions.insert(conditions.end(), other.conditions.begin(),
                      other.conditions.end());
  }
};

/* Default tolerances (see README). */
namespace tol {
inline constexpr double algebraic = 1e-9;
inline constexpr double closure = 1e-12;
inline constexpr double group_membership = 1e-10;
inline constexpr double fd_h = 1e-3;
inline constexpr double fd_const = 100.0;  // threshold = fd_const * h^2
inline double fd(double h) { return fd_const * h * h; }
}  // namespace tol

}  // namespace hgt
