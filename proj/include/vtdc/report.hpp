#pragma once

// Serialization of results. CSV uses ',' separators, '.' decimals and LF
// line endings independent of the process locale.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "vtdc/characterize.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/tofpet.hpp"

namespace vtdc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kConversionCsvHeader = "t_start_fs,t_stop_fs,code,bits,flags,dt_est_fs";
inline constexpr std::string_view kTransferCsvHeader = "dt_fs,code";
inline constexpr std::string_view kEventsCsvHeader = "event_id,x_true_mm,t1_fs,t2_fs,code,x_est_mm,err_mm";

/// One row, no trailing newline.
std::string conversion_csv_row(const ConversionResult& r);

std::string transfer_curve_csv(const TransferCurve& curve);
std::string nonlinearity_json(const NonlinearityReport& report);
std::string precision_json(const PrecisionReport& report);
std::string events_csv(const ExperimentResult& result);
std::string tof_summary_json(const ExperimentResult& result, const DetectorGeometry& geom, const TdcMetrics& m,
                             Seed seed);

/// Presentation-only plots.
std::string transfer_curve_svg(const TransferCurve& curve);
std::string error_histogram_svg(const ErrorHistogram& hist);

/// Writes `content` to a sibling temp file and renames it over `path`.
/// Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vtdc
