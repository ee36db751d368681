#include "gmrbm/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gmrbm/format.hpp"

namespace gmrbm {

namespace {

std::string csv_label(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), ',', ';');
  std::replace(out.begin(), out.end(), '"', '\'');
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double x) { return format_double(x, 2); }

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string svg_open(std::string_view title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + xml_escape(title) +
       "</text>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(kWidth - kRight) +
       "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  return s;
}

}  // namespace

std::string parameter_sweep_csv(std::span<const EpeffReport> reports) {
  std::string out = "label,mean_p,energy,epeff,cores\n";
  for (const auto& r : reports) {
    out += csv_label(r.label) + ',' + format_double(r.mean_p) + ',' + format_double(r.energy) + ',' +
           format_double(r.epeff) + ',' + std::to_string(r.resources.cores) + '\n';
  }
  return out;
}

std::string leak_sweep_csv(std::span<const EpeffReport> reports) {
  const auto peak = interior_maximum(reports);
  std::string out = "leak_density,mean_p,energy,epeff,cores,leak_neurons,total_neurons,interior_max\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const int density = r.config ? r.config->leak_density : 0;
    out += std::to_string(density) + ',' + format_double(r.mean_p) + ',' + format_double(r.energy) + ',' +
           format_double(r.epeff) + ',' + std::to_string(r.resources.cores) + ',' +
           std::to_string(r.resources.leak_neurons) + ',' + std::to_string(r.resources.total_neurons) + ',' +
           (peak && *peak == i ? "1" : "0") + '\n';
  }
  return out;
}

std::string histogram_csv(const PValueStats& stats) {
  std::string out = "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    out += format_double(0.05 * static_cast<double>(b), 2) + ',' + format_double(0.05 * static_cast<double>(b + 1), 2) +
           ',' + std::to_string(stats.histogram[b]) + '\n';
  }
  return out;
}

std::string pvalues_csv(const PValueStats& stats) {
  std::string out = "trial,p_value\n";
  for (std::size_t i = 0; i < stats.p_values.size(); ++i)
    out += std::to_string(i) + ',' + format_double(stats.p_values[i]) + '\n';
  return out;
}

std::string outcome_json(const CrossmatchOutcome& o) {
  nlohmann::ordered_json j;
  j["n"] = o.n;
  j["a_obs"] = o.a_obs;
  j["p_value"] = o.p_value;
  j["method"] = to_string(o.method);
  j["matching_cost"] = o.matching_cost;
  j["null_exact"] = o.null_exact;
  return j.dump(2) + "\n";
}

std::string null_check_json(const PValueStats& stats, std::size_t n_per_trial, double mean_low, double mean_high,
                            double max_cdf_excess) {
  nlohmann::ordered_json j;
  j["trials"] = stats.p_values.size();
  j["n_per_trial"] = n_per_trial;
  j["mean_p"] = stats.mean_p;
  j["ks_vs_uniform"] = stats.ks_vs_uniform;
  j["cdf_excess"] = stats.cdf_excess;
  j["mean_band"] = {mean_low, mean_high};
  j["pass"] = stats.mean_p >= mean_low && stats.mean_p <= mean_high && stats.cdf_excess <= max_cdf_excess;
  return j.dump(2) + "\n";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string svg_bar_chart(std::string_view title, std::span<const std::string> labels, std::span<const double> values,
                          std::string_view y_label) {
  require(labels.size() == values.size(), ErrorCode::dimension_mismatch, "bar chart labels and values differ in length");
  std::string s = svg_open(title);
  const double top = std::max(1e-300, values.empty() ? 1.0 : *std::max_element(values.begin(), values.end()));
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double slot = values.empty() ? plot_w : plot_w / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = std::max(0.0, values[i]) / top * plot_h;
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(kHeight - kBottom - h) + "\" width=\"" + num(slot * 0.7) +
         "\" height=\"" + num(h) + "\" fill=\"steelblue\"><title>" + xml_escape(labels[i]) + ": " +
         format_double(values[i]) + "</title></rect>\n";
    s += "<text x=\"" + num(x + slot * 0.35) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(labels[i]) + "</text>\n";
  }
  s += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) + "\" transform=\"rotate(-90 16 " + num(kTop + plot_h / 2) +
       ")\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(y_label) + "</text>\n";
  s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) + "\" text-anchor=\"end\" font-size=\"10\">" +
       format_double(top) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string svg_line_chart(std::string_view title, std::span<const std::string> x_labels,
                           std::span<const ChartSeries> series, std::string_view x_label) {
  static constexpr const char* colors[] = {"steelblue", "firebrick", "darkgreen", "darkorange"};
  std::string s = svg_open(title);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const std::size_t n = x_labels.size();
  auto x_at = [&](std::size_t i) {
    return n <= 1 ? kLeft + plot_w / 2 : kLeft + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    s += "<text x=\"" + num(x_at(i)) + "\" y=\"" + num(kHeight - kBottom + 18) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(x_labels[i]) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(x_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    require(ser.values.size() == n, ErrorCode::dimension_mismatch, "line chart series length mismatch");
    const double top = std::max(1e-300, n == 0 ? 1.0 : *std::max_element(ser.values.begin(), ser.values.end()));
    const char* color = colors[k % std::size(colors)];
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = kHeight - kBottom - std::max(0.0, ser.values[i]) / top * plot_h;
      if (i) points += ' ';
      points += num(x_at(i)) + "," + num(y);
      s += "<circle cx=\"" + num(x_at(i)) + "\" cy=\"" + num(y) + "\" r=\"3\" fill=\"" + color + "\"><title>" +
           xml_escape(ser.name) + ": " + format_double(ser.values[i]) + "</title></circle>\n";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    s += "<text x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 14 * static_cast<double>(k + 1)) + "\" fill=\"" + color +
         "\" font-size=\"12\">" + xml_escape(ser.name) + " (max " + format_double(top) + ")</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace gmrbm
