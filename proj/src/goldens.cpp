#include "holo/goldens.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "holo/diffraction.hpp"
#include "holo/encoding.hpp"
#include "holo/error.hpp"
#include "holo/gs.hpp"
#include "holo/io.hpp"
#include "holo/phase_init.hpp"

namespace holo::goldens {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

ComplexField real_as_field(const std::vector<double>& values, const ComplexField& like) {
  std::vector<Complex> s(values.begin(), values.end());
  return like.with_samples(std::move(s));
}

ComplexField random_field(std::mt19937_64& gen, std::size_t n, Pitch pitch, double wavelength) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> s(n * n);
  for (auto& z : s) {
    const double re = u(gen);
    z = {re, u(gen)};
  }
  return ComplexField(n, n, pitch, wavelength, std::move(s));
}

struct PlanParams {
  double z, psx, psy, pdx, pdy, wavelength, shift_x, shift_y;
};

void add_plan_params(GoldenCase& c, const PlanParams& p) {
  c.params.insert(c.params.end(), {{"z", fmt(p.z)},
                                   {"source_pitch_x", fmt(p.psx)},
                                   {"source_pitch_y", fmt(p.psy)},
                                   {"dest_pitch_x", fmt(p.pdx)},
                                   {"dest_pitch_y", fmt(p.pdy)},
                                   {"wavelength", fmt(p.wavelength)},
                                   {"shift_x", fmt(p.shift_x)},
                                   {"shift_y", fmt(p.shift_y)}});
}

PropagationPlan plan_from(const GoldenCase& c, Shape shape) {
  return make_plan(c.number("z"), {c.number("source_pitch_x"), c.number("source_pitch_y")},
                   {c.number("dest_pitch_x"), c.number("dest_pitch_y")}, c.number("wavelength"), shape,
                   {c.number("shift_x"), c.number("shift_y")});
}

ConvergentPhaseSpec convergent_from(const GoldenCase& c, const ComplexField& geometry) {
  ConvergentPhaseSpec spec;
  spec.focal_length = c.number("focal_length");
  spec.offset = {c.number("offset_x"), c.number("offset_y")};
  spec.wavelength = geometry.wavelength();
  spec.image_pitch = geometry.pitch();
  spec.grid = geometry.shape();
  return spec;
}

std::vector<double> real_parts(const ComplexField& f) {
  std::vector<double> out;
  out.reserve(f.samples().size());
  for (const Complex& z : f.samples()) out.push_back(z.real());
  return out;
}

ComplexField compute(const GoldenCase& c, const ComplexField& input) {
  if (c.op == "propagate") return propagate(plan_from(c, input.shape()), input);
  if (c.op == "propagate_inverse") return propagate_inverse(plan_from(c, input.shape()), input);
  if (c.op == "convergent_phase") return real_as_field(convergent_phase(convergent_from(c, input)).data, input);
  if (c.op == "encode_phase_only") return real_as_field(encode_phase_only(input).phase, input);
  if (c.op == "encode_bleached") return real_as_field(encode_bleached(input).phase, input);
  if (c.op == "gs") {
    const auto plan = plan_from(c, input.shape());
    const RealImage target(input.rows(), input.cols(), real_parts(input));
    GsConfig cfg;
    cfg.iterations = static_cast<int>(c.number("iterations"));
    cfg.encoding = parse_encoding(c.text("encoding"));
    ConvergentPhaseSpec spec;
    spec.focal_length = c.number("focal_length");
    spec.offset = {c.number("offset_x"), c.number("offset_y")};
    spec.wavelength = plan.wavelength();
    spec.image_pitch = plan.source_pitch();
    spec.grid = plan.shape();
    cfg.initial_phase = spec;
    const auto holo = gs_optimize(target, plan, cfg).hologram;
    const ComplexField like(holo.rows, holo.cols, holo.pitch, holo.wavelength);
    return real_as_field(holo.phase, like);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown golden op '" + c.op + "'");
}

double compare(const std::string& metric, const ComplexField& got, const ComplexField& want) {
  const auto a = got.samples();
  const auto b = want.samples();
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (metric == "rel_l2") {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      num += std::norm(a[k] - b[k]);
      den += std::norm(b[k]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  if (metric == "phase_rms") {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = std::remainder(a[k].real() - b[k].real(), 2.0 * std::numbers::pi);
      sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown golden metric '" + metric + "'");
}

void write_manifest(const GoldenManifest& m) {
  std::ostringstream out;
  out << "holo-golden-manifest " << m.version << '\n' << "seed " << m.seed << '\n';
  for (const auto& c : m.cases) {
    out << '\n'
        << "case " << c.id << '\n'
        << "op " << c.op << '\n'
        << "input " << c.input.generic_string() << '\n'
        << "expected " << c.expected.generic_string() << '\n'
        << "metric " << c.metric << '\n'
        << "tolerance " << fmt(c.tolerance) << '\n';
    for (const auto& [k, v] : c.params) out << "param " << k << ' ' << v << '\n';
    out << "end\n";
  }
  std::ofstream f(m.directory / kManifestName, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + m.directory.string());
  f << out.str();
  if (!f) throw Error(ErrorCode::IoFailure, "manifest write failed");
}

void emit_case(GoldenManifest& m, GoldenCase c, const ComplexField& input) {
  c.input = c.id + ".in.cfld";
  c.expected = c.id + ".out.cfld";
  io::write_field(m.directory / c.input, input);
  io::write_field(m.directory / c.expected, compute(c, input));
  m.cases.push_back(std::move(c));
}

}  // namespace

double GoldenCase::number(const std::string& key) const {
  const std::string& v = text(key);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument, "param '" + key + "' of case " + id + " is not numeric");
  }
  return out;
}

const std::string& GoldenCase::text(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "case " + id + " has no param '" + key + "'");
}

GoldenManifest emit_goldens(const fs::path& directory, std::uint64_t seed) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + directory.string());

  GoldenManifest m;
  m.seed = seed;
  m.directory = directory;
  std::mt19937_64 gen(seed);
  constexpr std::size_t n = 32;
  constexpr double lambda = 532e-9;
  constexpr double ps = 8e-6;
  constexpr double z = 0.05;

  for (const double s : {0.2, 1.0, 2.0, 5.0}) {
    for (const int shifted : {0, 1}) {
      const double shift = shifted ? 10.0 * s * ps : 0.0;
      GoldenCase c;
      c.id = "propagate_s" + fmt(s) + (shifted ? "_shifted" : "");
      c.op = "propagate";
      c.metric = "rel_l2";
      c.tolerance = 1e-4;
      add_plan_params(c, {z, ps, ps, s * ps, s * ps, lambda, shift, shift});
      emit_case(m, std::move(c), random_field(gen, n, {ps, ps}, lambda));
    }
  }
  for (const double s : {0.2, 5.0}) {
    GoldenCase c;
    c.id = "propagate_inverse_s" + fmt(s);
    c.op = "propagate_inverse";
    c.metric = "rel_l2";
    c.tolerance = 1e-4;
    add_plan_params(c, {z, ps, ps, s * ps, s * ps, lambda, 0.0, 0.0});
    emit_case(m, std::move(c), random_field(gen, n, {s * ps, s * ps}, lambda));
  }

  const double image_pitch = 18.7e-6;
  const double holo_pitch = 3.74e-6;
  const double f = focal_length(0.5, 19.1e-3, 3.8e-3);
  {
    GoldenCase c;
    c.id = "convergent_phase";
    c.op = "convergent_phase";
    c.metric = "rel_l2";
    c.tolerance = 1e-9;
    c.params = {{"focal_length", fmt(f)}, {"offset_x", fmt(20.48e-3)}, {"offset_y", fmt(20.48e-3)}};
    emit_case(m, std::move(c), ComplexField(n, n, {image_pitch, image_pitch}, lambda));
  }
  for (const char* op : {"encode_phase_only", "encode_bleached"}) {
    GoldenCase c;
    c.id = op;
    c.op = op;
    c.metric = c.op == "encode_phase_only" ? "phase_rms" : "rel_l2";
    c.tolerance = 1e-9;
    emit_case(m, std::move(c), random_field(gen, n, {holo_pitch, holo_pitch}, lambda));
  }
  {
    // 32-sample version of the projection geometry (distance and offsets scaled by 32/1024).
    const double zg = 0.5 * n / 1024.0;
    const double offset = 20.48e-3 * n / 1024.0;
    const double fg = focal_length(zg, n * image_pitch, n * holo_pitch);
    const double shift = -offset * zg / fg;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> target(n * n);
    for (auto& t : target) t = {u(gen), 0.0};
    GoldenCase c;
    c.id = "gs_3_iterations";
    c.op = "gs";
    c.metric = "phase_rms";
    c.tolerance = 1e-6;
    add_plan_params(c, {zg, image_pitch, image_pitch, holo_pitch, holo_pitch, lambda, shift, shift});
    c.params.insert(c.params.end(), {{"iterations", "3"},
                                     {"encoding", "phase-only"},
                                     {"focal_length", fmt(fg)},
                                     {"offset_x", fmt(offset)},
                                     {"offset_y", fmt(offset)}});
    emit_case(m, std::move(c), ComplexField(n, n, {image_pitch, image_pitch}, lambda, std::move(target)));
  }
  write_manifest(m);
  return m;
}

GoldenManifest load_manifest(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kManifestName : path;
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + file.string());

  GoldenManifest m;
  m.directory = file.parent_path();
  std::string line;
  GoldenCase* current = nullptr;
  bool header = false;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::UnsupportedFormat, file.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (!header) {
      if (key != "holo-golden-manifest" || !(ls >> m.version) || m.version != 1) fail("bad manifest header");
      header = true;
      continue;
    }
    if (key == "seed" && current == nullptr) {
      ls >> m.seed;
    } else if (key == "case") {
      if (current != nullptr) fail("nested case");
      m.cases.emplace_back();
      current = &m.cases.back();
      ls >> current->id;
    } else if (current == nullptr) {
      fail("'" + key + "' outside a case");
    } else if (key == "op") {
      ls >> current->op;
    } else if (key == "input") {
      std::string p;
      ls >> p;
      current->input = p;
    } else if (key == "expected") {
      std::string p;
      ls >> p;
      current->expected = p;
    } else if (key == "metric") {
      ls >> current->metric;
    } else if (key == "tolerance") {
      ls >> current->tolerance;
    } else if (key == "param") {
      std::string k, v;
      ls >> k >> v;
      current->params.emplace_back(k, v);
    } else if (key == "end") {
      current = nullptr;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!header) fail("empty manifest");
  if (current != nullptr) fail("unterminated case");
  for (const auto& c : m.cases) {
    for (const auto& rel : {c.input, c.expected}) {
      if (!fs::exists(m.directory / rel)) {
        throw Error(ErrorCode::IoFailure, "case " + c.id + " references missing file " + rel.string());
      }
    }
  }
  return m;
}

std::vector<ReplayResult> replay(const GoldenManifest& manifest) {
  std::vector<ReplayResult> results;
  for (const auto& c : manifest.cases) {
    const ComplexField input = io::read_field(manifest.directory / c.input);
    const ComplexField expected = io::read_field(manifest.directory / c.expected);
    const double err = compare(c.metric, compute(c, input), expected);
    results.push_back({c.id, err, c.tolerance, err <= c.tolerance});
  }
  return results;
}

}  // namespace holo::goldens
