#include "vtdc/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>

namespace vtdc {

using ordered_json = nlohmann::ordered_json;

std::string conversion_csv_row(const ConversionResult& r) {
  return fmt::format("{},{},{},{},{},{}", r.t_start.fs(), r.t_stop.fs(), r.code.value, r.code.to_string(),
                     r.code.flags.to_string(), r.delta_t_estimate.fs());
}

std::string transfer_curve_csv(const TransferCurve& curve) {
  std::string out(kTransferCsvHeader);
  out += '\n';
  for (const auto& p : curve.points) out += fmt::format("{},{}\n", p.delta_t.fs(), p.code);
  return out;
}

std::string nonlinearity_json(const NonlinearityReport& report) {
  ordered_json j;
  j["lsb_fs"] = report.lsb.fs();
  auto& t = j["transitions_fs"] = ordered_json::array();
  for (Duration d : report.transitions) t.push_back(d.fs());
  j["dnl"] = report.dnl;
  j["inl"] = report.inl;
  j["dnl_peak"] = report.dnl_peak;
  j["inl_peak"] = report.inl_peak;
  return j.dump(2) + "\n";
}

std::string precision_json(const PrecisionReport& report) {
  ordered_json j;
  j["delta_t_fs"] = report.delta_t.fs();
  j["n_trials"] = report.n_trials;
  j["code_mean"] = report.code_mean;
  j["code_std"] = report.code_std;
  auto& h = j["histogram"] = ordered_json::object();
  for (const auto& [code, count] : report.histogram) h[std::to_string(code)] = count;
  return j.dump(2) + "\n";
}

std::string events_csv(const ExperimentResult& result) {
  std::string out(kEventsCsvHeader);
  out += '\n';
  for (const auto& e : result.events) {
    out += fmt::format("{},{:.6f},{},{},{},{:.6f},{:.6f}\n", e.event_id, e.x_true_mm, e.t1.fs(), e.t2.fs(), e.code,
                       e.x_est_mm, e.err_mm);
  }
  return out;
}

std::string tof_summary_json(const ExperimentResult& result, const DetectorGeometry& geom, const TdcMetrics& m,
                             Seed seed) {
  const auto& s = result.summary;
  ordered_json j;
  j["n_events"] = s.n_events;
  j["n_overrange"] = s.n_overrange;
  j["mean_abs_err_mm"] = s.mean_abs_err_mm;
  j["max_abs_err_mm"] = s.max_abs_err_mm;
  j["rms_err_mm"] = s.rms_err_mm;
  j["fwhm_mm"] = s.fwhm_mm;
  j["lsb_fs"] = m.lsb.fs();
  j["quantization_bound_mm"] = displacement_mm(m.lsb, geom) / 2.0;
  j["separation_mm"] = geom.separation_mm;
  j["c_mm_per_ns"] = geom.c_mm_per_ns;
  j["seed"] = seed.value;
  auto& h = j["error_histogram"];
  h["bin_width_mm"] = result.histogram.bin_width_mm;
  h["lower_edge_mm"] = result.histogram.lower_edge_mm;
  h["counts"] = result.histogram.counts;
  return j.dump(2) + "\n";
}

namespace {

constexpr double kW = 640.0;
constexpr double kH = 400.0;
constexpr double kPad = 40.0;

std::string svg_open() {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kW, kH);
}

}  // namespace

std::string transfer_curve_svg(const TransferCurve& curve) {
  std::string out = svg_open();
  if (!curve.points.empty()) {
    const double x0 = curve.points.front().delta_t.ps();
    const double x1 = std::max(curve.points.back().delta_t.ps(), x0 + 1e-9);
    std::int64_t cmax = 1;
    for (const auto& p : curve.points) cmax = std::max(cmax, p.code);
    const auto sx = [&](double ps) { return kPad + (ps - x0) / (x1 - x0) * (kW - 2 * kPad); };
    const auto sy = [&](double c) { return kH - kPad - c / static_cast<double>(cmax) * (kH - 2 * kPad); };

    out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    double prev_y = sy(static_cast<double>(curve.points.front().code));
    for (const auto& p : curve.points) {
      const double x = sx(p.delta_t.ps());
      const double y = sy(static_cast<double>(p.code));
      out += fmt::format("{:.2f},{:.2f} {:.2f},{:.2f} ", x, prev_y, x, y);
      prev_y = y;
    }
    out += "\"/>\n";
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">delta t [ps]: {:.3f} .. {:.3f}</text>\n", kPad,
                       kH - 10, x0, x1);
    out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"12\">code 0 .. {}</text>\n", kPad, cmax);
  }
  out += "</svg>\n";
  return out;
}

std::string error_histogram_svg(const ErrorHistogram& hist) {
  std::string out = svg_open();
  if (!hist.counts.empty()) {
    const auto peak = std::max<std::int64_t>(1, *std::max_element(hist.counts.begin(), hist.counts.end()));
    const double bw = (kW - 2 * kPad) / static_cast<double>(hist.counts.size());
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      const double h = static_cast<double>(hist.counts[i]) / static_cast<double>(peak) * (kH - 2 * kPad);
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"steelblue\"/>\n",
                         kPad + static_cast<double>(i) * bw, kH - kPad - h, bw, h);
    }
    const double lo = hist.lower_edge_mm;
    const double hi = lo + hist.bin_width_mm * static_cast<double>(hist.counts.size());
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">error [mm]: {:.3f} .. {:.3f}, FWHM {:.3f}</text>\n",
                       kPad, kH - 10, lo, hi, hist.fwhm_mm());
  }
  out += "</svg>\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(fmt::format("cannot rename '{}' to '{}'", tmp.string(), path.string()));
  }
}

}  // namespace vtdc
