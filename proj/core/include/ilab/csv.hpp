#pragma once

#include <iomanip>
#include <ostream>
#include <span>
#include <vector>

#include "ilab/multilevel.hpp"
#include "ilab/sde.hpp"
#include "ilab/types.hpp"

namespace ilab::csv {

inline void set_precision(std::ostream& os) { os << std::setprecision(17); }

// Schema: idx,x1,...,xN
inline void write_samples(std::ostream& os, std::span<const double> rows, int dim) {
  set_precision(os);
  os << "idx";
  for (int j = 1; j <= dim; ++j) os << ",x" << j;
  os << '\n';
  const std::size_t n = rows.size() / static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < n; ++i) {
    os << i;
    for (int j = 0; j < dim; ++j)
      os << ',' << rows[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
    os << '\n';
  }
}

// Schema: t,x1,...,xN
inline void write_path(std::ostream& os, const sde::PathRecord& rec) {
  set_precision(os);
  const int dim = rec.states.empty() ? 0 : rec.states.front().n();
  os << "t";
  for (int j = 1; j <= dim; ++j) os << ",x" << j;
  os << '\n';
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    os << rec.times[k];
    for (double v : rec.states[k].values) os << ',' << v;
    os << '\n';
  }
}

// Schema: t,level,index,value
inline void write_pattern_path(std::ostream& os,
                               const std::vector<multilevel::PatternSnapshot>& snaps) {
  set_precision(os);
  os << "t,level,index,value\n";
  for (const auto& s : snaps)
    for (int n = 1; n <= s.pattern.depth(); ++n)
      for (int i = 0; i < n; ++i)
        os << s.t << ',' << n << ',' << i + 1 << ','
           << s.pattern.level(n).values[static_cast<std::size_t>(i)] << '\n';
}

inline void write_pushblock_path(std::ostream& os,
                                 const std::vector<multilevel::PushBlockSnapshot>& snaps) {
  set_precision(os);
  os << "t,level,index,value\n";
  for (const auto& s : snaps)
    for (int n = 1; n <= s.pattern.depth(); ++n)
      for (int i = 0; i < n; ++i)
        os << s.t << ',' << n << ',' << i + 1 << ','
           << s.pattern.levels[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)]
           << '\n';
}

}  // namespace ilab::csv
