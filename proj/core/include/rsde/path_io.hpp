#pragma once

#include <filesystem>
#include <iosfwd>

#include "rsde/model.hpp"
#include "rsde/simulate.hpp"

namespace rsde {

// CSV layouts (17 significant digits, round-trip exact):
//   two-sided path   t,x,l,r
//   one-sided path   t,x,l
//   two-factor path  t,y,l1,u1,r,l2

void write_path_csv(std::ostream& os, const SamplePath& path);

/// Reads a path whose header must match the barrier kind. The step size is
/// t_1 - t_0 and must be uniform; hit flags are rebuilt from regulator growth.
SamplePath read_path_csv(std::istream& is, const BarrierConfig& barriers);

void write_two_factor_csv(std::ostream& os, const TwoFactorPath& path);
TwoFactorPath read_two_factor_csv(std::istream& is, double a, double b);

void save_path_csv(const std::filesystem::path& file, const SamplePath& path);
SamplePath load_path_csv(const std::filesystem::path& file, const BarrierConfig& barriers);

}  // namespace rsde
