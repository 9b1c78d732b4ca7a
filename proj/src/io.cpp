// SPDX-License-Identifier: Apache-2.0
#include "gfpl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfpl/errors.hpp"

namespace gfpl {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

}  // namespace

json regime_json(const RegimeReport& report) {
  json j;
  j["lambda_star"] = report.lambda_star;
  j["condition_low"] = report.condition_low;
  j["regime"] = to_string(report.regime);
  j["beta_plus"] = opt_json(report.beta_plus);
  j["beta_minus"] = opt_json(report.beta_minus);
  j["L_prime_at_lambda"] = opt_json(report.L_prime_at_lambda);
  j["L_prime_boundary_flag"] =
      report.L_prime_at_lambda.has_value() &&
      !std::isfinite(*report.L_prime_at_lambda);
  j["recurrence_class"] = to_string(report.recurrence_class);
  return j;
}

json constants_json(const ModelParams& params,
                    const FragmentationKernel& kernel,
                    const RegimeReport& report) {
  const bool strict = report.regime == Regime::StrictMalthusian;
  json j = regime_json(report);
  j["a_minus"] = params.a_minus;
  j["a_plus"] = params.a_plus;
  const auto rates = kernel.total_rates();
  j["K"] = rates.first;
  j["r_tilde"] = rates.second;
  // The Malthus exponent equals lambda_star exactly when the weak condition
  // holds (strict or boundary regime).
  const bool weak = strict || report.regime == Regime::BoundaryLow ||
                    report.regime == Regime::BoundaryHigh;
  j["lambda"] = weak ? json(report.lambda_star) : json(nullptr);

  json c1 = nullptr, c2 = nullptr, c3 = nullptr, big_c = nullptr,
       mass = nullptr;
  if (strict) {
    const double m = -*report.L_prime_at_lambda;
    mass = m;
    c1 = 1.0 / m;
    if (report.beta_minus) {
      const double c = cramer_constant(params, kernel);
      big_c = c;
      c2 = c / m;
    }
    if (kernel.is_monomial()) c3 = 1.0 / m;
  }
  j["total_mass"] = mass;
  j["c1"] = c1;
  j["c2"] = c2;
  j["c3"] = c3;
  j["C"] = big_c;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

std::string profile_csv(const ProfileDensity& profile, double x_lo,
                        double x_hi, int points) {
  std::ostringstream out;
  out << "x,nu,branch\n";
  const double ly = std::log(x_lo);
  const double dy = (std::log(x_hi) - ly) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(ly + i * dy);
    const char* branch = "body";
    switch (profile.branch_at(x)) {
      case ProfileBranch::Tail:
        branch = "tail";
        break;
      case ProfileBranch::Asymptote:
        branch = "asymptote";
        break;
      default:
        break;
    }
    out << format_double(x) << ',' << format_double(profile.nu(x)) << ','
        << branch << '\n';
  }
  return out.str();
}

std::string series_csv(const std::vector<SeriesPoint>& series,
                       const std::vector<std::string>& observable_names) {
  std::ostringstream out;
  out << "t,count,mass,frag_leak_rate,outflow_rate";
  for (const auto& name : observable_names) out << ',' << name;
  out << '\n';
  for (const auto& pt : series) {
    out << format_double(pt.t) << ',' << format_double(pt.count) << ','
        << format_double(pt.mass) << ',' << format_double(pt.frag_leak_rate)
        << ',' << format_double(pt.outflow_rate);
    for (double v : pt.observables) out << ',' << format_double(v);
    out << '\n';
  }
  return out.str();
}

std::string density_csv(const std::vector<double>& x,
                        const std::vector<double>& density) {
  std::ostringstream out;
  out << "x,density\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    out << format_double(x[i]) << ',' << format_double(density[i]) << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e"};

}  // namespace

std::string svg_loglog_plot(const std::string& title,
                            const std::vector<SvgSeries>& series) {
  const double width = 760, height = 540;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  double lx0 = 0, lx1 = 1, ly0 = 0, ly1 = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      const double lx = std::log10(s.x[i]);
      const double ly = std::log10(s.y[i]);
      if (first) {
        lx0 = lx1 = lx;
        ly0 = ly1 = ly;
        first = false;
      } else {
        lx0 = std::min(lx0, lx);
        lx1 = std::max(lx1, lx);
        ly0 = std::min(ly0, ly);
        ly1 = std::max(ly1, ly);
      }
    }
  }
  if (lx1 - lx0 < 1e-12) lx1 = lx0 + 1;
  if (ly1 - ly0 < 1e-12) ly1 = ly0 + 1;
  auto px = [&](double lx) {
    return ml + (lx - lx0) / (lx1 - lx0) * (width - ml - mr);
  };
  auto py = [&](double ly) {
    return height - mb - (ly - ly0) / (ly1 - ly0) * (height - mt - mb);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title
      << "</text>\n";
  // Decade grid lines and labels.
  for (int d = static_cast<int>(std::ceil(lx0)); d <= std::floor(lx1); ++d) {
    out << "<line x1=\"" << px(d) << "\" y1=\"" << py(ly0) << "\" x2=\""
        << px(d) << "\" y2=\"" << py(ly1)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(d) << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">1e"
        << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= std::floor(ly1); ++d) {
    out << "<line x1=\"" << px(lx0) << "\" y1=\"" << py(d) << "\" x2=\""
        << px(lx1) << "\" y2=\"" << py(d)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(d) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">1e"
        << d << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\""
      << width - ml - mr << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  int color = 0;
  double legend_y = mt + 16;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 5];
    out << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      out << px(std::log10(s.x[i])) << ',' << py(std::log10(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - mr - 8 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\""
        << stroke << "\">" << s.label << "</text>\n";
    legend_y += 16;
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gfpl
