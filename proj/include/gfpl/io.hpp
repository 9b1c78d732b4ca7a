// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_IO_HPP
#define GFPL_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gfpl/config.hpp"
#include "gfpl/pde.hpp"
#include "gfpl/profile.hpp"
#include "gfpl/spectral.hpp"

namespace gfpl {

// Shortest round-trip representation; identical runs produce identical bytes.
std::string format_double(double value);

nlohmann::json regime_json(const RegimeReport& report);

// Every named constant of the model; null where the regime forbids a value.
nlohmann::json constants_json(const ModelParams& params,
                              const FragmentationKernel& kernel,
                              const RegimeReport& report);

void write_text_file(const std::string& path, const std::string& content);

std::string profile_csv(const ProfileDensity& profile, double x_lo,
                        double x_hi, int points);

std::string series_csv(const std::vector<SeriesPoint>& series,
                       const std::vector<std::string>& observable_names);

std::string density_csv(const std::vector<double>& x,
                        const std::vector<double>& density);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal log-log polyline plot.
std::string svg_loglog_plot(const std::string& title,
                            const std::vector<SvgSeries>& series);

}  // namespace gfpl

#endif  // GFPL_IO_HPP
