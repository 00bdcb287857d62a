#include "asymcurve/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace asymcurve {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  return f;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return f;
}

void trim(std::string& s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  s.erase(0, i);
}

double parse_field(std::string_view f, std::size_t row) {
  while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
  while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  if (!f.empty() && f.front() == '+') f.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size() || f.empty())
    throw ParseError("bad number '" + std::string(f) + "'", row);
  return v;
}

nlohmann::json opt_scan(const std::optional<ScanResult>& r, double delta) {
  if (!r) return {{"delta", delta}, {"sup", nullptr}, {"pairs_evaluated", 0}};
  return to_json(*r);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const SampledCurve& curve) {
  out << "x,y,s\n";
  auto row = [&](const Point& p, double s) {
    out << format_double(p.x()) << ',' << format_double(p.y()) << ','
        << format_double(s) << '\n';
  };
  for (Index i = 0; i < curve.size(); ++i) row(curve.point(i), curve.s(i));
  if (curve.closed()) row(curve.point(0), curve.length());
}

void write_csv(const std::filesystem::path& path, const SampledCurve& curve) {
  auto f = open_out(path);
  write_csv(f, curve);
  if (!f) throw Error("write failed: " + path.string());
}

SampledCurve read_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  bool header = false;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    ++row;
    trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "x,y,s" && line != "x,y")
        throw ParseError("expected header x,y,s", row);
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto c = rest.find(',');
      fields.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("expected 2 or 3 fields, got " + std::to_string(fields.size()), row);
    const double x = parse_field(fields[0], row);
    const double y = parse_field(fields[1], row);
    if (fields.size() == 3) parse_field(fields[2], row);
    if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError("non-finite coordinate", row);
    if (!pts.empty() && pts.back() == Point(x, y))
      throw ParseError("repeats the previous point", row);
    pts.emplace_back(x, y);
  }
  if (!header) throw ParseError("empty file", row);
  const bool closed = pts.size() > 3 && pts.front() == pts.back();
  if (closed) pts.pop_back();
  if (pts.size() < 2) throw ParseError("fewer than two points", row);
  return SampledCurve::from_points(pts, closed);
}

SampledCurve read_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  return read_csv(f);
}

void write_svg(std::ostream& out, const SampledCurve& curve, double stroke) {
  const Eigen::Matrix2Xd& P = curve.points();
  const Point lo = P.rowwise().minCoeff();
  const Point hi = P.rowwise().maxCoeff();
  const double pad = 0.05 * std::max((hi - lo).maxCoeff(), 1e-12);
  const double x0 = lo.x() - pad, y0 = lo.y() - pad;
  const double w = hi.x() - lo.x() + 2 * pad, h = hi.y() - lo.y() + 2 * pad;

  // Flip y so the picture is y-up; the path keeps the curve's own coordinates.
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(x0)
      << ' ' << format_double(-(y0 + h)) << ' ' << format_double(w) << ' '
      << format_double(h) << "\">\n";
  out << "<path transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\""
      << format_double(stroke) << "\" d=\"";
  for (Index i = 0; i < curve.size(); ++i)
    out << (i == 0 ? "M" : " L") << format_double(P(0, i)) << ','
        << format_double(P(1, i));
  if (curve.closed()) out << " Z";
  out << "\"/>\n</svg>\n";
}

void write_svg(const std::filesystem::path& path, const SampledCurve& curve,
               double stroke) {
  auto f = open_out(path);
  write_svg(f, curve, stroke);
  if (!f) throw Error("write failed: " + path.string());
}

SampledCurve read_svg_path(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto tag = text.find("<path");
  if (tag == std::string::npos) throw ParseError("no path element", 0);
  const auto d = text.find(" d=\"", tag);
  if (d == std::string::npos) throw ParseError("path has no data", 0);
  const auto end = text.find('"', d + 4);
  std::string_view data(text.data() + d + 4, end - d - 4);

  std::vector<Point> pts;
  bool closed = false;
  while (!data.empty()) {
    const char c = data.front();
    if (c == ' ') {
      data.remove_prefix(1);
    } else if (c == 'Z' || c == 'z') {
      closed = true;
      data.remove_prefix(1);
    } else if (c == 'M' || c == 'L') {
      data.remove_prefix(1);
      const auto comma = data.find(',');
      auto stop = data.find_first_of(" LZ", comma);
      if (stop == std::string_view::npos) stop = data.size();
      const double x = parse_field(data.substr(0, comma), pts.size() + 1);
      const double y = parse_field(data.substr(comma + 1, stop - comma - 1), pts.size() + 1);
      pts.emplace_back(x, y);
      data.remove_prefix(stop);
    } else {
      throw ParseError(std::string("unsupported path command '") + c + "'", pts.size() + 1);
    }
  }
  return SampledCurve::from_points(pts, closed);
}

nlohmann::json build_manifest(const CurveStack& stack, int samples_per_bump,
                              std::size_t budget) {
  nlohmann::json beta = nlohmann::json::array(), eps = nlohmann::json::array(),
                 K = nlohmann::json::array(), pieces = nlohmann::json::array(),
                 lengths = nlohmann::json::array();
  std::size_t total = 0;
  for (const Level& l : stack.levels) {
    lengths.push_back(l.curve.length());
    total += static_cast<std::size_t>(l.curve.size());
    if (!l.params) {
      pieces.push_back(1);
      continue;
    }
    beta.push_back(l.params->beta);
    eps.push_back(l.params->eps);
    K.push_back(l.params->K_prev);
    pieces.push_back(l.params->piece_count());
  }
  return {{"n", stack.n},
          {"depth", stack.depth()},
          {"beta", beta},
          {"eps", eps},
          {"K", K},
          {"piece_counts", pieces},
          {"lengths", lengths},
          {"samples_per_bump", samples_per_bump},
          {"budget", budget},
          {"total_samples", total},
          {"warnings", stack.warnings()}};
}

nlohmann::json to_json(const ScanResult& r) {
  return {{"delta", r.delta},
          {"sup", r.sup_value},
          {"argmax", {r.s_a, r.s_b}},
          {"pairs_evaluated", r.pairs_evaluated},
          {"grid_size", r.grid_size},
          {"stride", r.stride},
          {"spacing", r.spacing},
          {"exhaustive", r.exhaustive}};
}

nlohmann::json to_json(const UAResult& r) {
  return {{"found", r.found},
          {"n_min", r.found ? nlohmann::json(r.n) : nlohmann::json(nullptr)},
          {"n_tried", r.n},
          {"ratio", r.ratio},
          {"arc_length", r.arc_length}};
}

nlohmann::json to_json(const ClassificationReport& rep) {
  nlohmann::json conf = nlohmann::json::array(), smooth = nlohmann::json::array(),
                 ua = nlohmann::json::array();
  for (const auto& e : rep.conformality) conf.push_back(opt_scan(e.scan, e.delta));
  for (const auto& e : rep.smoothness) smooth.push_back(opt_scan(e.scan, e.delta));
  for (const auto& e : rep.ua) {
    nlohmann::json j = to_json(e.result);
    j["subarc"] = {e.subarc.s_start, e.subarc.s_end};
    j["epsilon"] = e.epsilon;
    j["mode"] = to_string(e.mode);
    ua.push_back(std::move(j));
  }
  return {{"chordarc", to_json(rep.chordarc)},
          {"conformality", conf},
          {"smoothness", smooth},
          {"ua", ua},
          {"consistency_flags",
           {{"conformality_to_one", rep.conformality_to_one},
            {"smoothness_to_one", rep.smoothness_to_one},
            {"ua_all_found", rep.ua_all_found},
            {"forward_consistent", rep.forward_consistent}}}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace asymcurve
