#pragma once

#include <string>
#include <vector>

#include "phonon/app/output.hpp"

namespace phonon::app {

inline constexpr int kFigureCount = 6;

/// Empty vectors keep the caption parameters.
struct FigureOverrides {
  std::vector<double> c_values;
  std::vector<double> nth_values;
  int jobs = 1;
};

/// 1, 2: hitemp n_ss and g2 against C for n_th in {1e3, 1e4, 1e5, 1e6}.
/// 3: hitemp P(n) at n_th = 1e4, C = 1e2 with thermal and Poisson references.
/// 4: exact n_ss against C for n_th in {1, 10, 20, 40}.
/// 5: exact g2 over a C x n_th grid.
/// 6: exact P(n) at n_th = 20 for C in {1, 41, 1000}.
Table figure_table(int id, const FigureOverrides& overrides = {});

/// matplotlib script that reads only `csv_name`.
std::string plot_script(int id, const std::string& csv_name);

}  // namespace phonon::app
