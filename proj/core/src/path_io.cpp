#include "rsde/path_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "csv.hpp"
#include "rsde/errors.hpp"

namespace rsde {
namespace {

double infer_step(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw DataError("path CSV needs at least two observations");
  const double t0 = rows[0][0];
  const double h = rows[1][0] - t0;
  if (!(h > 0.0)) throw DataError("path times must be increasing");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double expected = t0 + static_cast<double>(k) * h;
    if (std::abs(rows[k][0] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw DataError("path times are not equally spaced");
    }
  }
  return h;
}

void rebuild_hits(SamplePath& path) {
  const std::size_t n = path.increments();
  path.hit_lower.assign(n, 0);
  path.hit_upper.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    path.hit_lower[k] = path.l[k + 1] > path.l[k] ? 1 : 0;
    path.hit_upper[k] = path.r[k + 1] > path.r[k] ? 1 : 0;
  }
}

SamplePath columns_to_path(const std::vector<std::vector<double>>& rows, std::size_t x_col,
                           std::size_t l_col, int r_col, const BarrierConfig& barriers) {
  SamplePath path;
  path.h = infer_step(rows);
  path.barriers = barriers;
  for (const auto& row : rows) {
    path.t.push_back(row[0]);
    path.x.push_back(row[x_col]);
    path.l.push_back(row[l_col]);
    path.r.push_back(r_col >= 0 ? row[static_cast<std::size_t>(r_col)] : 0.0);
  }
  rebuild_hits(path);
  path.check_invariants();
  return path;
}

}  // namespace

void write_path_csv(std::ostream& os, const SamplePath& path) {
  const bool two_sided = path.barriers.is_two_sided();
  os << (two_sided ? "t,x,l,r\n" : "t,x,l\n");
  for (std::size_t k = 0; k < path.x.size(); ++k) {
    os << csv::fmt17(path.t[k]) << ',' << csv::fmt17(path.x[k]) << ',' << csv::fmt17(path.l[k]);
    if (two_sided) os << ',' << csv::fmt17(path.r[k]);
    os << '\n';
  }
}

SamplePath read_path_csv(std::istream& is, const BarrierConfig& barriers) {
  if (barriers.is_two_sided()) {
    return columns_to_path(csv::read_table(is, {"t", "x", "l", "r"}), 1, 2, 3, barriers);
  }
  return columns_to_path(csv::read_table(is, {"t", "x", "l"}), 1, 2, -1, barriers);
}

void write_two_factor_csv(std::ostream& os, const TwoFactorPath& tf) {
  os << "t,y,l1,u1,r,l2\n";
  for (std::size_t k = 0; k < tf.y.x.size(); ++k) {
    os << csv::fmt17(tf.y.t[k]) << ',' << csv::fmt17(tf.y.x[k]) << ',' << csv::fmt17(tf.y.l[k])
       << ',' << csv::fmt17(tf.y.r[k]) << ',' << csv::fmt17(tf.rate.x[k]) << ','
       << csv::fmt17(tf.rate.l[k]) << '\n';
  }
}

TwoFactorPath read_two_factor_csv(std::istream& is, double a, double b) {
  const auto rows = csv::read_table(is, {"t", "y", "l1", "u1", "r", "l2"});
  TwoFactorPath tf;
  tf.y = columns_to_path(rows, 1, 2, 3, BarrierConfig::two_sided(a, b));
  tf.rate = columns_to_path(rows, 4, 5, -1, BarrierConfig::one_sided_lower(0.0));
  return tf;
}

void save_path_csv(const std::filesystem::path& file, const SamplePath& path) {
  std::ofstream os(file);
  if (!os) throw DataError("cannot open '" + file.string() + "' for writing");
  write_path_csv(os, path);
}

SamplePath load_path_csv(const std::filesystem::path& file, const BarrierConfig& barriers) {
  std::ifstream is(file);
  if (!is) throw DataError("cannot open '" + file.string() + "'");
  return read_path_csv(is, barriers);
}

}  // namespace rsde
