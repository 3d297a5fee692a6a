#include "bqs/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bqs/errors.hpp"

namespace bqs {

namespace {

// All fields are written value by value in little-endian order; this host
// is little endian, so the raw byte copy is the wire format.
template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f, Real time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("snapshot: cannot open '" + path + "' for writing");
  out.write("BQS1", 4);
  put<std::uint32_t>(out, 1);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.grid->n_dims()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.components));
  put<std::uint8_t>(out, f.side == Side::Physical ? 0 : 1);
  put<std::uint8_t>(out, 0);
  for (int a = 0; a < f.grid->n_dims(); ++a)
    put<std::uint64_t>(out, static_cast<std::uint64_t>(f.grid->points()[a]));
  for (int a = 0; a < f.grid->n_dims(); ++a) put<double>(out, f.grid->half_widths()[a]);
  put<double>(out, time);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    put<double>(out, f.values[i].real());
    put<double>(out, f.values[i].imag());
  }
  if (!out) throw Error("snapshot: write to '" + path + "' failed");
}

std::pair<Field, Real> read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("snapshot: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "BQS1", 4) != 0)
    throw Error("snapshot: '" + path + "' is not a field snapshot");
  const auto version = get<std::uint32_t>(in);
  if (version != 1)
    throw Error("snapshot: unsupported version " + std::to_string(version));
  const int n_dims = get<std::uint8_t>(in);
  const int components = get<std::uint8_t>(in);
  const int side_tag = get<std::uint8_t>(in);
  get<std::uint8_t>(in);  // pad
  if (n_dims < 1 || n_dims > 3 || components < 1 || side_tag > 1)
    throw Error("snapshot: '" + path + "' has a corrupt header");

  std::vector<int> points(static_cast<std::size_t>(n_dims));
  for (int a = 0; a < n_dims; ++a)
    points[static_cast<std::size_t>(a)] = static_cast<int>(get<std::uint64_t>(in));
  std::vector<Real> half(static_cast<std::size_t>(n_dims));
  for (int a = 0; a < n_dims; ++a) half[static_cast<std::size_t>(a)] = get<double>(in);
  const Real time = get<double>(in);
  if (!in) throw Error("snapshot: '" + path + "' truncated header");

  Field f = make_field(make_grid(points, half), components,
                       side_tag == 0 ? Side::Physical : Side::Spectral);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    f.values[i] = Complex(re, im);
  }
  if (!in) throw Error("snapshot: '" + path + "' truncated samples");
  return {std::move(f), time};
}

std::string trace_csv_text(const SolutionTrace& trace,
                           const std::vector<int>* window_of_time,
                           const std::vector<SolveWindow>* windows) {
  std::string out =
      "t,norm_u_X1,norm_u_Xp,norm_u_Xinf,norm_u_Ysp,"
      "norm_ut_Xp,norm_ut_Xinf,norm_ut_Ysp,"
      "window_index,picard_iters,contraction_estimate\n";
  char buf[512];
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    int w = 0;
    int iters = 0;
    Real contraction = 0.0;
    if (window_of_time && windows && k < window_of_time->size()) {
      w = (*window_of_time)[k];
      if (w >= 0 && w < static_cast<int>(windows->size())) {
        iters = (*windows)[static_cast<std::size_t>(w)].picard_iters;
        contraction = (*windows)[static_cast<std::size_t>(w)].contraction_estimate;
      }
    }
    const NormRecord& un = trace.u_norms[k];
    const NormRecord& vn = trace.ut_norms[k];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n",
                  trace.times[k], un.x1, un.xp, un.xinf, un.ysp, vn.xp, vn.xinf, vn.ysp,
                  w, iters, contraction);
    out += buf;
  }
  return out;
}

void write_trace_csv(const std::string& path, const SolutionTrace& trace,
                     const std::vector<int>* window_of_time,
                     const std::vector<SolveWindow>* windows) {
  std::ofstream out(path);
  if (!out) throw Error("csv: cannot open '" + path + "' for writing");
  out << trace_csv_text(trace, window_of_time, windows);
  if (!out) throw Error("csv: write to '" + path + "' failed");
}

}  // namespace bqs
