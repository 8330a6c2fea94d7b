#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vtdc/characterize.hpp"
#include "vtdc/cli.hpp"
#include "vtdc/config.hpp"
#include "vtdc/delay_line.hpp"
#include "vtdc/sampler.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/time.hpp"
#include "vtdc/tofpet.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

// Time, Duration and Seed cross the boundary as plain Python ints
// (femtoseconds / 64-bit seed).
namespace pybind11::detail {

template <class T, class Rep>
struct int_wrapper_caster {
  PYBIND11_TYPE_CASTER(T, const_name("int"));

  bool load(handle src, bool convert) {
    make_caster<Rep> inner;
    if (!inner.load(src, convert)) return false;
    value = T{cast_op<Rep>(inner)};
    return true;
  }
};

template <>
struct type_caster<vtdc::Duration> : int_wrapper_caster<vtdc::Duration, std::int64_t> {
  static handle cast(vtdc::Duration d, return_value_policy, handle) { return PyLong_FromLongLong(d.fs()); }
};
template <>
struct type_caster<vtdc::Time> : int_wrapper_caster<vtdc::Time, std::int64_t> {
  static handle cast(vtdc::Time t, return_value_policy, handle) { return PyLong_FromLongLong(t.fs()); }
};
template <>
struct type_caster<vtdc::Seed> : int_wrapper_caster<vtdc::Seed, std::uint64_t> {
  static handle cast(vtdc::Seed s, return_value_policy, handle) { return PyLong_FromUnsignedLongLong(s.value); }
};

}  // namespace pybind11::detail

namespace {

py::dict flags_dict(const vtdc::CodeFlags& f) {
  return py::dict("overrange"_a = f.overrange, "underrange"_a = f.underrange, "bubble"_a = f.bubble);
}

py::dict binary_dict(const vtdc::BinaryCode& c) {
  return py::dict("value"_a = c.value, "width"_a = c.width, "bits"_a = c.to_string(), "flags"_a = flags_dict(c.flags));
}

py::dict conversion_dict(const vtdc::ConversionResult& r) {
  return py::dict("t_start"_a = r.t_start, "t_stop"_a = r.t_stop, "code"_a = binary_dict(r.code),
                  "thermometer"_a = r.thermometer.to_string(), "delta_t_estimate"_a = r.delta_t_estimate);
}

py::dict metrics_dict(const vtdc::TdcMetrics& m) {
  return py::dict("lsb"_a = m.lsb, "full_scale_range"_a = m.full_scale_range, "n_codes"_a = m.n_codes);
}

// std::variant casting needs a default-constructible variant; realized
// converters are not, so dispatch by hand.
vtdc::Tdc as_tdc(const py::object& o) {
  if (py::isinstance<vtdc::VernierTdc>(o)) return o.cast<vtdc::VernierTdc>();
  if (py::isinstance<vtdc::FlashTdc>(o)) return o.cast<vtdc::FlashTdc>();
  throw py::type_error("expected a VernierTdc or FlashTdc");
}

vtdc::DelayLineSpec line_spec(int n, vtdc::Duration nominal, vtdc::Duration mismatch, vtdc::Duration jitter) {
  return {n, nominal, mismatch, jitter};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Behavioral Vernier delay-line TDC simulator (times are integer femtoseconds)";

  py::register_exception<vtdc::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<vtdc::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<vtdc::OverflowError>(m, "OverflowError", PyExc_OverflowError);
  py::register_exception<vtdc::OverrangeError>(m, "OverrangeError", PyExc_ValueError);

  // core
  m.def("time_from_ps", [](const std::string& s) { return vtdc::time_from_ps(s); }, "text"_a);
  m.def("format_ps", [](std::int64_t fs) { return vtdc::format_ps(fs); }, "fs"_a);
  m.def("sub_seed", [](vtdc::Seed base, std::uint64_t i) { return vtdc::sub_seed(base, i); }, "base"_a, "index"_a);

  py::class_<vtdc::DelayLineSpec>(m, "DelayLineSpec")
      .def(py::init(&line_spec), "n_stages"_a, "nominal_stage_delay"_a, "mismatch_sigma"_a = vtdc::Duration{0},
           "jitter_sigma"_a = vtdc::Duration{0})
      .def_readwrite("n_stages", &vtdc::DelayLineSpec::n_stages)
      .def_readwrite("nominal_stage_delay", &vtdc::DelayLineSpec::nominal_stage_delay)
      .def_readwrite("mismatch_sigma", &vtdc::DelayLineSpec::mismatch_sigma)
      .def_readwrite("jitter_sigma", &vtdc::DelayLineSpec::jitter_sigma);

  m.def(
      "realize_delay_line",
      [](const vtdc::DelayLineSpec& spec, vtdc::Seed seed) {
        const auto line = vtdc::realize_delay_line(spec, seed);
        return std::vector<vtdc::Duration>(line.stage_delays().begin(), line.stage_delays().end());
      },
      "spec"_a, "seed"_a);
  m.def(
      "tap_times",
      [](std::vector<vtdc::Duration> delays, vtdc::Time edge, vtdc::Duration jitter, vtdc::Seed seed) {
        return vtdc::tap_times(vtdc::DelayLineInstance(std::move(delays)), edge, jitter, seed);
      },
      "stage_delays"_a, "edge"_a, "jitter_sigma"_a = vtdc::Duration{0}, "seed"_a = vtdc::Seed{0});

  // sampler / encoder, thermometer codes as '0'/'1' strings
  m.def("arbiter_sample", &vtdc::arbiter_sample, "data_edge"_a, "clock_edge"_a);
  m.def(
      "sample_bank",
      [](const std::vector<vtdc::Time>& start, const std::vector<vtdc::Time>& stop) {
        return vtdc::sample_bank(start, stop).to_string();
      },
      "start_taps"_a, "stop_taps"_a);
  m.def(
      "leading_ones",
      [](const std::string& bits) {
        const auto lo = vtdc::leading_ones(vtdc::ThermometerCode::from_string(bits));
        return py::make_tuple(lo.count, lo.bubble);
      },
      "bits"_a);
  m.def(
      "priority_encode",
      [](const std::string& bits) { return binary_dict(vtdc::priority_encode(vtdc::ThermometerCode::from_string(bits))); },
      "bits"_a);

  // converters
  py::class_<vtdc::VernierTdcConfig>(m, "VernierTdcConfig")
      .def(py::init([](vtdc::DelayLineSpec slow, vtdc::DelayLineSpec fast) {
             return vtdc::VernierTdcConfig{slow, fast};
           }),
           "slow_line"_a, "fast_line"_a)
      .def_readwrite("slow_line", &vtdc::VernierTdcConfig::slow_line)
      .def_readwrite("fast_line", &vtdc::VernierTdcConfig::fast_line)
      .def("metrics", [](const vtdc::VernierTdcConfig& c) { return metrics_dict(vtdc::metrics(c)); });

  py::class_<vtdc::FlashTdcConfig>(m, "FlashTdcConfig")
      .def(py::init([](vtdc::DelayLineSpec line) { return vtdc::FlashTdcConfig{line}; }), "line"_a)
      .def_readwrite("line", &vtdc::FlashTdcConfig::line)
      .def("metrics", [](const vtdc::FlashTdcConfig& c) { return metrics_dict(vtdc::metrics(c)); });

  py::class_<vtdc::VernierTdc>(m, "VernierTdc")
      .def(py::init<vtdc::VernierTdcConfig, vtdc::Seed>(), "config"_a, "mismatch_seed"_a = vtdc::Seed{0})
      .def("convert",
           [](const vtdc::VernierTdc& t, vtdc::Time a, vtdc::Time b, vtdc::Seed s) {
             return conversion_dict(t.convert(a, b, s));
           },
           "t_start"_a, "t_stop"_a, "jitter_seed"_a = vtdc::Seed{0})
      .def("metrics", [](const vtdc::VernierTdc& t) { return metrics_dict(t.metrics()); })
      .def_property_readonly("n_stages", &vtdc::VernierTdc::n_stages);

  py::class_<vtdc::FlashTdc>(m, "FlashTdc")
      .def(py::init<vtdc::FlashTdcConfig, vtdc::Seed>(), "config"_a, "mismatch_seed"_a = vtdc::Seed{0})
      .def("convert",
           [](const vtdc::FlashTdc& t, vtdc::Time a, vtdc::Time b, vtdc::Seed s) {
             return conversion_dict(t.convert(a, b, s));
           },
           "t_start"_a, "t_stop"_a, "jitter_seed"_a = vtdc::Seed{0})
      .def("metrics", [](const vtdc::FlashTdc& t) { return metrics_dict(t.metrics()); })
      .def_property_readonly("n_stages", &vtdc::FlashTdc::n_stages);

  m.def(
      "vernier_convert",
      [](const vtdc::VernierTdcConfig& c, vtdc::Time a, vtdc::Time b, vtdc::Seed s) {
        return conversion_dict(vtdc::vernier_convert(c, a, b, s));
      },
      "config"_a, "t_start"_a, "t_stop"_a, "seed"_a = vtdc::Seed{0});
  m.def(
      "flash_convert",
      [](const vtdc::FlashTdcConfig& c, vtdc::Time a, vtdc::Time b, vtdc::Seed s) {
        return conversion_dict(vtdc::flash_convert(c, a, b, s));
      },
      "config"_a, "t_start"_a, "t_stop"_a, "seed"_a = vtdc::Seed{0});
  m.def(
      "ideal_code", [](vtdc::Duration lsb, int n, vtdc::Duration dt) { return vtdc::ideal_code(lsb, n, dt); }, "lsb"_a,
      "n_stages"_a, "delta_t"_a);

  // characterization
  m.def(
      "sweep_transfer",
      [](const py::object& tdc, vtdc::Duration lo, vtdc::Duration hi, vtdc::Duration step) {
        std::vector<std::pair<vtdc::Duration, std::int64_t>> pts;
        for (const auto& p : vtdc::sweep_transfer(as_tdc(tdc), lo, hi, step).points) pts.emplace_back(p.delta_t, p.code);
        return pts;
      },
      "tdc"_a, "t_min"_a, "t_max"_a, "step"_a);
  m.def(
      "refine_transitions",
      [](const py::object& tdc, vtdc::Duration lo, vtdc::Duration hi, vtdc::Duration step) {
        return vtdc::refine_transitions(as_tdc(tdc), lo, hi, step);
      },
      "tdc"_a, "t_min"_a, "t_max"_a, "coarse_step"_a = vtdc::Duration{0});
  m.def(
      "dnl_inl",
      [](const std::vector<vtdc::Duration>& transitions, vtdc::Duration lsb) {
        const auto r = vtdc::dnl_inl(transitions, lsb);
        return py::dict("lsb"_a = r.lsb, "transitions"_a = r.transitions, "dnl"_a = r.dnl, "inl"_a = r.inl,
                        "dnl_peak"_a = r.dnl_peak, "inl_peak"_a = r.inl_peak);
      },
      "transitions"_a, "lsb"_a);
  m.def(
      "single_shot",
      [](const py::object& tdc, vtdc::Duration dt, std::int64_t n, vtdc::Seed seed) {
        const auto r = vtdc::single_shot(as_tdc(tdc), dt, n, seed);
        return py::dict("delta_t"_a = r.delta_t, "n_trials"_a = r.n_trials, "code_mean"_a = r.code_mean,
                        "code_std"_a = r.code_std, "histogram"_a = r.histogram);
      },
      "tdc"_a, "delta_t"_a, "n_trials"_a, "seed"_a = vtdc::Seed{0});

  // TOF-PET
  py::class_<vtdc::DetectorGeometry>(m, "DetectorGeometry")
      .def(py::init([](double sep, double c) { return vtdc::DetectorGeometry{sep, c}; }), "separation_mm"_a = 800.0,
           "c_mm_per_ns"_a = vtdc::kSpeedOfLightMmPerNs)
      .def_readwrite("separation_mm", &vtdc::DetectorGeometry::separation_mm)
      .def_readwrite("c_mm_per_ns", &vtdc::DetectorGeometry::c_mm_per_ns);

  m.def(
      "arrival_times",
      [](const vtdc::DetectorGeometry& g, double x, vtdc::Time emission) {
        const auto rec = vtdc::arrival_times(g, {x, emission});
        return py::make_tuple(rec.t1, rec.t2);
      },
      "geometry"_a, "position_mm"_a, "emission_time"_a = vtdc::Time{0});
  m.def("displacement_mm", &vtdc::displacement_mm, "dt"_a, "geometry"_a);
  m.def(
      "localize",
      [](const vtdc::DetectorGeometry& g, vtdc::Time t1, vtdc::Time t2, const py::object& tdc, vtdc::Seed seed) {
        const auto r = vtdc::localize(g, {t1, t2}, as_tdc(tdc), seed);
        return py::dict("measured_code"_a = r.measured_code, "dt_estimate"_a = r.dt_estimate,
                        "position_estimate_mm"_a = r.position_estimate_mm, "sign"_a = r.sign,
                        "flags"_a = flags_dict(r.flags));
      },
      "geometry"_a, "t1"_a, "t2"_a, "tdc"_a, "seed"_a = vtdc::Seed{0});
  m.def(
      "run_experiment",
      [](const vtdc::DetectorGeometry& g, const py::object& tdc, std::int64_t n_events, std::optional<double> fixed_mm,
         vtdc::Seed seed) {
        vtdc::ExperimentOptions opts;
        opts.n_events = n_events;
        if (fixed_mm) opts.distribution = vtdc::PositionDistribution::fixed(*fixed_mm);
        const auto r = vtdc::run_experiment(g, as_tdc(tdc), opts, seed);
        const auto& s = r.summary;
        return py::dict("n_events"_a = s.n_events, "n_overrange"_a = s.n_overrange,
                        "mean_abs_err_mm"_a = s.mean_abs_err_mm, "max_abs_err_mm"_a = s.max_abs_err_mm,
                        "rms_err_mm"_a = s.rms_err_mm, "fwhm_mm"_a = s.fwhm_mm,
                        "histogram_total"_a = r.histogram.total());
      },
      "geometry"_a, "tdc"_a, "n_events"_a, "fixed_position_mm"_a = std::nullopt, "seed"_a = vtdc::Seed{0});

  // CLI
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = vtdc::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a);
}
