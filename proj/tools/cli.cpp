#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "holo/error.hpp"
#include "holo/goldens.hpp"
#include "holo/io.hpp"
#include "holo/pipeline.hpp"

namespace holo::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kGeometryKeys = {"wavelength", "holo-pitch", "image-pitch", "distance", "offset-x",
                                                "offset-y",   "grid",       "encoding",    "iterations", "seed",
                                                "init",       "scaled"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string canonical_key(std::string key) {
  std::ranges::replace(key, '_', '-');
  return key;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string fixed6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return {buf, res.ptr};
}

template <class T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) throw UsageError("--" + key + ": expected an integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw UsageError("--" + key + ": expected true or false, got '" + value + "'");
}

/// Geometry/run options shared by the pipeline commands. Values stay as text
/// until the config file and the flags are merged.
struct GeometryOptions {
  std::map<std::string, std::string> flag_values;
  std::string config_path;
  bool scaled_flag = false;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config_path, "key = value file; flags override it");
    const std::map<std::string, std::string> help = {
        {"wavelength", "wavelength (default 532nm)"},
        {"holo-pitch", "hologram pixel pitch (default 3.74um)"},
        {"image-pitch", "image pixel pitch (default 18.7um)"},
        {"distance", "propagation distance (default 0.5m)"},
        {"offset-x", "convergent-beam offset along x (default 20.48mm)"},
        {"offset-y", "convergent-beam offset along y (default 20.48mm)"},
        {"grid", "samples per side (default 1024)"},
        {"encoding", "phase-only | bleached"},
        {"iterations", "GS iterations"},
        {"seed", "random-phase seed (default 0)"},
        {"init", "random | convergent"},
    };
    for (const auto& key : kGeometryKeys) {
      if (key == "scaled") continue;
      sub->add_option("--" + key, flag_values[key], help.at(key));
    }
    sub->add_flag("--scaled", scaled_flag, "scale distance and offsets by grid/1024 (desk-size runs)");
  }

  std::map<std::string, std::string> merged() const {
    std::map<std::string, std::string> values;
    if (!config_path.empty()) values = read_config_file(config_path);
    for (const auto& [key, value] : flag_values) {
      if (app->get_option("--" + key)->count() > 0) values[key] = value;
    }
    if (scaled_flag) values["scaled"] = "true";
    return values;
  }
};

struct CommandDefaults {
  InitKind init = InitKind::Convergent;
  int iterations = 0;
};

RunConfig resolve(const std::map<std::string, std::string>& values, CommandDefaults defaults) {
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  std::size_t grid = 1024;
  if (const auto* v = get("grid")) grid = parse_integer<std::size_t>("grid", *v);
  const bool scaled = get("scaled") != nullptr && parse_bool("scaled", *get("scaled"));

  RunConfig cfg = scaled ? scaled_config(grid) : RunConfig{};
  cfg.grid = grid;
  cfg.init = defaults.init;
  cfg.iterations = defaults.iterations;
  if (const auto* v = get("wavelength")) cfg.wavelength = parse_quantity(*v);
  if (const auto* v = get("holo-pitch")) cfg.holo_pitch = parse_quantity(*v);
  if (const auto* v = get("image-pitch")) cfg.image_pitch = parse_quantity(*v);
  if (const auto* v = get("distance")) cfg.distance = parse_quantity(*v);
  if (const auto* v = get("offset-x")) cfg.offset.x = parse_quantity(*v);
  if (const auto* v = get("offset-y")) cfg.offset.y = parse_quantity(*v);
  if (const auto* v = get("encoding")) {
    try {
      cfg.encoding = parse_encoding(*v);
    } catch (const Error&) {
      throw UsageError("--encoding: expected phase-only or bleached, got '" + *v + "'");
    }
  }
  if (const auto* v = get("iterations")) {
    cfg.iterations = parse_integer<int>("iterations", *v);
    if (cfg.iterations < 0) throw UsageError("--iterations must be >= 0");
  }
  if (const auto* v = get("seed")) cfg.seed = parse_integer<std::uint64_t>("seed", *v);
  if (const auto* v = get("init")) {
    if (*v == "random") {
      cfg.init = InitKind::Random;
    } else if (*v == "convergent") {
      cfg.init = InitKind::Convergent;
    } else {
      throw UsageError("--init: expected random or convergent, got '" + *v + "'");
    }
  }
  for (const auto& [key, value] : values) {
    if (std::ranges::find(kGeometryKeys, key) == kGeometryKeys.end() && key != "out") {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

void ensure_parent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + path.parent_path().string());
}

fs::path resolve_out(const std::string& flag, const std::map<std::string, std::string>& values) {
  if (!flag.empty()) return flag;
  const auto it = values.find("out");
  if (it != values.end() && !it->second.empty()) return it->second;
  throw UsageError("--out is required");
}

std::string describe(const PhaseHologram& h) {
  return std::to_string(h.rows) + "x" + std::to_string(h.cols) + " pitch=" + fmt(h.pitch.x) +
         " wavelength=" + fmt(h.wavelength) + " encoding=" + std::string(to_string(h.encoding));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoFailure:
    case ErrorCode::MissingSidecar:
    case ErrorCode::BadMagic:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::TruncatedPayload:
    case ErrorCode::UnsupportedFormat:
      return kIo;
    default:
      return kValidation;
  }
}

struct ZoomRow {
  double ratio;
  double focal;
  double psnr;
  double ssim;
};

}  // namespace

double parse_quantity(std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr == s.data()) throw UsageError("not a quantity: '" + std::string(text) + "'");
  const std::string unit = trim(std::string_view(res.ptr, s.data() + s.size() - res.ptr));
  static const std::map<std::string, double> scale = {
      {"", 1.0},      {"m", 1.0},           {"cm", 1e-2},          {"mm", 1e-3},
      {"um", 1e-6},   {"\xC2\xB5m", 1e-6},  {"\xCE\xBCm", 1e-6},   {"nm", 1e-9},
  };
  const auto it = scale.find(unit);
  if (it == scale.end()) throw UsageError("unknown unit '" + unit + "' in '" + std::string(text) + "'");
  if (!std::isfinite(value)) throw UsageError("not a finite quantity: '" + std::string(text) + "'");
  return value * it->second;
}

std::vector<double> parse_ratios(std::string_view text) {
  auto number = [&](std::string_view part) {
    const std::string s = trim(part);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw UsageError("bad ratio list '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    const auto a = item.find(':');
    if (a == std::string_view::npos) {
      out.push_back(number(item));
    } else {
      const auto b = item.find(':', a + 1);
      if (b == std::string_view::npos) throw UsageError("ratio range needs start:stop:step");
      const double start = number(item.substr(0, a));
      const double stop = number(item.substr(a + 1, b - a - 1));
      const double step = number(item.substr(b + 1));
      if (!(step > 0.0) || stop < start) throw UsageError("ratio range needs step > 0 and stop >= start");
      for (std::size_t k = 0;; ++k) {
        const double r = start + static_cast<double>(k) * step;
        if (r > stop + 1e-9 * step) break;
        out.push_back(r);
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    values[canonical_key(trim(std::string_view(line).substr(0, eq)))] = trim(std::string_view(line).substr(eq + 1));
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaled-diffraction hologram generation, optimization and scoring", "holo"};
  app.require_subcommand(1);
  std::function<int()> action;

  // generate
  GeometryOptions gen_opts;
  std::string gen_image;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "image -> hologram PNG (single scaled propagation)");
  gen->add_option("image", gen_image, "input image (PNG)")->required();
  gen->add_option("--out", gen_out, "hologram PNG path (sidecar written next to it)");
  gen_opts.attach(gen);
  gen->callback([&] {
    action = [&] {
      const auto values = gen_opts.merged();
      const RunConfig cfg = resolve(values, {InitKind::Convergent, 0});
      const fs::path path = resolve_out(gen_out, values);
      const RealImage target = io::load_image(gen_image, cfg.grid);
      const PhaseHologram holo = generate(target, cfg);
      ensure_parent(path);
      io::write_hologram_png(path, holo);
      out << "hologram " << describe(holo) << " -> " << path.string() << '\n';
      return int{kOk};
    };
  });

  // gs
  GeometryOptions gs_opts;
  std::string gs_image;
  std::string gs_out;
  std::string gs_trace;
  auto* gs = app.add_subcommand("gs", "image -> GS-optimized hologram PNG + residual trace CSV");
  gs->add_option("image", gs_image, "input image (PNG)")->required();
  gs->add_option("--out", gs_out, "hologram PNG path");
  gs->add_option("--trace", gs_trace, "trace CSV path (default: <out>.trace.csv)");
  gs_opts.attach(gs);
  gs->callback([&] {
    action = [&] {
      const auto values = gs_opts.merged();
      const RunConfig cfg = resolve(values, {InitKind::Random, 10});
      const fs::path path = resolve_out(gs_out, values);
      const fs::path trace_path = gs_trace.empty() ? fs::path(path.string() + ".trace.csv") : fs::path(gs_trace);
      const RealImage target = io::load_image(gs_image, cfg.grid);
      const GsResult result = optimize(target, cfg, make_run_plan(cfg));
      ensure_parent(path);
      ensure_parent(trace_path);
      io::write_hologram_png(path, result.hologram);
      std::string csv = "iteration,residual\n";
      for (std::size_t i = 0; i < result.trace.residual.size(); ++i) {
        csv += std::to_string(i + 1) + "," + fmt(result.trace.residual[i]) + "\n";
      }
      write_text(trace_path, csv);
      out << "hologram " << describe(result.hologram) << " iterations=" << cfg.iterations << " -> " << path.string()
          << '\n'
          << "trace -> " << trace_path.string() << '\n';
      return int{kOk};
    };
  });

  // reconstruct
  GeometryOptions rec_opts;
  std::string rec_holo;
  std::string rec_out;
  auto* rec = app.add_subcommand("reconstruct", "hologram PNG -> 8-bit reconstruction PNG");
  rec->add_option("hologram", rec_holo, "hologram PNG with sidecar")->required();
  rec->add_option("--out", rec_out, "reconstruction PNG path");
  rec_opts.attach(rec);
  rec->callback([&] {
    action = [&] {
      auto values = rec_opts.merged();
      const fs::path path = resolve_out(rec_out, values);
      const PhaseHologram holo = io::read_hologram_png(rec_holo);
      if (holo.rows != holo.cols) throw Error(ErrorCode::InvalidGeometry, "hologram must be square");
      // The sidecar is authoritative for the hologram-plane sampling.
      const std::map<std::string, double> from_sidecar = {{"holo-pitch", holo.pitch.x},
                                                          {"wavelength", holo.wavelength}};
      for (const auto& [key, value] : from_sidecar) {
        const auto it = values.find(key);
        if (it != values.end() && std::abs(parse_quantity(it->second) - value) > 1e-9 * value) {
          throw Error(ErrorCode::InvalidGeometry, "--" + key + " conflicts with the hologram sidecar");
        }
        values[key] = fmt(value);
      }
      if (const auto it = values.find("grid");
          it != values.end() && parse_integer<std::size_t>("grid", it->second) != holo.rows) {
        throw Error(ErrorCode::InvalidGeometry, "--grid conflicts with the hologram size");
      }
      values["grid"] = std::to_string(holo.rows);
      const RunConfig cfg = resolve(values, {});
      const GrayImage image = reconstruct(holo, cfg);
      ensure_parent(path);
      io::write_gray_png(path, image);
      out << "reconstruction " << image.rows << "x" << image.cols << " pitch=" << fmt(cfg.image_pitch) << " -> "
          << path.string() << '\n';
      return int{kOk};
    };
  });

  // metrics
  std::string met_ref;
  std::string met_test;
  auto* met = app.add_subcommand("metrics", "PSNR and SSIM of a test image against a reference");
  met->add_option("reference", met_ref, "reference image")->required();
  met->add_option("test", met_test, "test image")->required();
  met->callback([&] {
    action = [&] {
      const GrayImage ref = to_u8(io::load_image(met_ref));
      const GrayImage test = to_u8(io::load_image(met_test));
      const MetricsReport report = evaluate(ref, test);
      out << "reference: " << met_ref << '\n'
          << "test:      " << met_test << '\n'
          << "PSNR:      " << fixed6(report.psnr_db) << " dB\n"
          << "SSIM:      " << fixed6(report.ssim) << " (window " << report.params.window_size << ", sigma "
          << fmt(report.params.gaussian_sigma) << ")\n"
          << "PSNR=" << fixed6(report.psnr_db) << " SSIM=" << fixed6(report.ssim) << '\n';
      return int{kOk};
    };
  });

  // zoom-sweep
  GeometryOptions zoom_opts;
  std::string zoom_image;
  std::string zoom_out;
  std::string zoom_ratios = "2:5:0.25";
  auto* zoom = app.add_subcommand("zoom-sweep", "hologram + reconstruction per image/hologram pitch ratio");
  zoom->add_option("image", zoom_image, "input image (PNG)")->required();
  zoom->add_option("--out", zoom_out, "output directory");
  zoom->add_option("--ratios", zoom_ratios, "start:stop:step or comma list (default 2:5:0.25)");
  zoom_opts.attach(zoom);
  zoom->callback([&] {
    action = [&] {
      const auto values = zoom_opts.merged();
      const RunConfig base = resolve(values, {InitKind::Convergent, 0});
      const fs::path dir = resolve_out(zoom_out, values);
      const std::vector<double> ratios = parse_ratios(zoom_ratios);
      const RealImage target = io::load_image(zoom_image, base.grid);
      const GrayImage reference = to_u8(target);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string());

      std::vector<ZoomRow> rows;
      for (const double ratio : ratios) {
        RunConfig cfg = base;
        cfg.image_pitch = ratio * cfg.holo_pitch;
        ConvergentPhaseSpec spec;
        try {
          spec = convergent_spec(cfg);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InvalidGeometry) throw;
          err << "warning: skipping ratio " << fmt(ratio) << ": " << e.what() << '\n';
          continue;
        }
        const PropagationPlan plan = make_run_plan(cfg);
        const PhaseHologram holo =
            cfg.iterations > 0 ? optimize(target, cfg, plan).hologram : generate(target, cfg, plan);
        const GrayImage recon = reconstruct(holo, cfg, plan);
        const MetricsReport report = evaluate(reference, recon);
        const std::string tag = "R" + fmt(ratio);
        io::write_hologram_png(dir / ("holo_" + tag + ".png"), holo);
        io::write_gray_png(dir / ("recon_" + tag + ".png"), recon);
        rows.push_back({ratio, spec.focal_length, report.psnr_db, report.ssim});
        out << "R=" << fmt(ratio) << " image_pitch=" << fmt(cfg.image_pitch) << " f_i=" << fmt(spec.focal_length)
            << " PSNR=" << fixed6(report.psnr_db) << " SSIM=" << fixed6(report.ssim) << '\n';
      }
      std::string csv = "ratio,f_i,psnr,ssim\n";
      for (const auto& r : rows) {
        csv += fmt(r.ratio) + "," + fmt(r.focal) + "," + fmt(r.psnr) + "," + fmt(r.ssim) + "\n";
      }
      write_text(dir / "index.csv", csv);
      out << "index -> " << (dir / "index.csv").string() << '\n';
      return int{kOk};
    };
  });

  // goldens
  std::string gold_dir;
  std::uint64_t gold_seed = 0;
  bool gold_replay = false;
  auto* gold = app.add_subcommand("goldens", "write (or replay) the golden-vector suite");
  gold->add_option("dir", gold_dir, "output directory")->required();
  gold->add_option("--seed", gold_seed, "seed for the random inputs (default 0)");
  gold->add_flag("--replay", gold_replay, "replay an existing manifest instead of writing one");
  gold->callback([&] {
    action = [&] {
      if (!gold_replay) {
        goldens::emit_goldens(gold_dir, gold_seed);
        const auto manifest = goldens::load_manifest(gold_dir);
        out << "wrote " << manifest.cases.size() << " cases -> "
            << (fs::path(gold_dir) / goldens::kManifestName).string() << '\n';
        return int{kOk};
      }
      const auto manifest = goldens::load_manifest(gold_dir);
      int failures = 0;
      for (const auto& r : goldens::replay(manifest)) {
        out << (r.pass ? "PASS " : "FAIL ") << r.id << " error=" << fmt(r.error) << " tolerance=" << fmt(r.tolerance)
            << '\n';
        failures += r.pass ? 0 : 1;
      }
      return failures == 0 ? int{kOk} : int{kValidation};
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int{kOk} : int{kUsage};
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace holo::cli
