#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bqs/field.hpp"
#include "bqs/fixedpoint.hpp"
#include "bqs/propagator.hpp"

namespace bqs {

// Binary snapshot of one field at one time.  Layout, little endian:
//   "BQS1"  u32 version=1  u8 n_dims  u8 components  u8 side  u8 pad
//   u64 points per axis, f64 half width per axis, f64 time,
//   then (re, im) f64 pairs, component-major, row-major per component.
void write_snapshot(const std::string& path, const Field& f, Real time);
std::pair<Field, Real> read_snapshot(const std::string& path);

/// Norm-history CSV: one row per stored time with the fixed column set
///   t, norm_u_X1, norm_u_Xp, norm_u_Xinf, norm_u_Ysp,
///   norm_ut_Xp, norm_ut_Xinf, norm_ut_Ysp,
///   window_index, picard_iters, contraction_estimate
/// printed with 17 significant digits.  window data may be null (plain
/// linear traces), in which case the last three columns are 0.
void write_trace_csv(const std::string& path, const SolutionTrace& trace,
                     const std::vector<int>* window_of_time = nullptr,
                     const std::vector<SolveWindow>* windows = nullptr);

std::string trace_csv_text(const SolutionTrace& trace,
                           const std::vector<int>* window_of_time = nullptr,
                           const std::vector<SolveWindow>* windows = nullptr);

}  // namespace bqs
