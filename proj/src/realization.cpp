#include "amodes/realization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace amodes {

namespace {

double dist2(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

// Squared distance for every determined pair: bars and system variables.
std::map<Edge, double> determined_distances(const MinorSystem& s, const DistanceAssignment& lengths,
                                            const std::vector<double>& solution) {
  if (solution.size() != s.variables.size())
    throw std::invalid_argument("solution has " + std::to_string(solution.size()) + " values, system has " +
                                std::to_string(s.variables.size()) + " variables");
  std::map<Edge, double> d;
  for (const Edge& e : s.graph.edges()) d[e] = lengths.squared(e).get_d();
  for (std::size_t i = 0; i < solution.size(); ++i) d[s.variables[i]] = solution[i];
  return d;
}

}  // namespace

ReconstructionPlan reconstruction_plan(const MinorSystem& s) {
  std::vector<int> order = s.placement_order;
  if (order.empty()) {
    std::vector<Edge> aug = s.graph.edges();
    aug.insert(aug.end(), s.variables.begin(), s.variables.end());
    order = trilateration_order(s.graph.vertex_count(), aug);
  }
  if (static_cast<int>(order.size()) != s.graph.vertex_count())
    throw std::invalid_argument("system admits no trilateration order");
  ReconstructionPlan plan;
  plan.base = {order[0], order[1], order[2]};
  auto is_variable = [&](Edge e) {
    return std::find(s.variables.begin(), s.variables.end(), e) != s.variables.end();
  };
  for (std::size_t i = 3; i < order.size(); ++i) {
    const int w = order[i];
    std::vector<int> bars, vars;
    for (std::size_t j = 0; j < i; ++j) {
      const int p = order[j];
      if (s.graph.has_edge(w, p)) bars.push_back(p);
      else if (is_variable(Edge(w, p))) vars.push_back(p);
    }
    bars.insert(bars.end(), vars.begin(), vars.end());
    if (bars.size() < 3) throw std::logic_error("placement order lacks three references");
    plan.steps.push_back({w, {bars[0], bars[1], bars[2]}});
  }
  return plan;
}

Realization reconstruct_embedding(const MinorSystem& s, const DistanceAssignment& lengths,
                                  const std::vector<double>& solution) {
  const auto d = determined_distances(s, lengths, solution);
  for (const auto& [e, v] : d)
    if (!(v > 0) || !std::isfinite(v))
      return Infeasible{"squared distance " + e.label() + " is not positive"};
  const ReconstructionPlan plan = reconstruction_plan(s);
  const int n = s.graph.vertex_count();
  std::vector<Point2> pts(n);
  auto sq = [&](int a, int b) { return d.at(Edge(a, b)); };

  Embedding emb;
  emb.graph = s.graph;
  const auto [b0, b1, b2] = plan.base;
  const double l01 = std::sqrt(sq(b0, b1));
  pts[b0 - 1] = {0, 0};
  pts[b1 - 1] = {l01, 0};
  {
    const double x = (sq(b0, b2) - sq(b1, b2) + l01 * l01) / (2 * l01);
    const double h2 = sq(b0, b2) - x * x;
    if (!(h2 > 1e-12 * sq(b0, b2))) throw std::invalid_argument("degenerate base triangle");
    pts[b2 - 1] = {x, std::sqrt(h2)};
  }

  for (const PlacementStep& st : plan.steps) {
    const Point2& a = pts[st.refs[0] - 1];
    const Point2& b = pts[st.refs[1] - 1];
    const Point2& c = pts[st.refs[2] - 1];
    const double ra2 = sq(st.vertex, st.refs[0]);
    const double rb2 = sq(st.vertex, st.refs[1]);
    const double rc2 = sq(st.vertex, st.refs[2]);
    const double dab = std::sqrt(dist2(a, b));
    if (!(dab > 0)) return Infeasible{"coincident reference vertices"};
    const double ux = (b[0] - a[0]) / dab, uy = (b[1] - a[1]) / dab;
    const double x = (ra2 - rb2 + dab * dab) / (2 * dab);
    const double h2 = ra2 - x * x;
    if (h2 < -1e-8 * ra2)
      return Infeasible{"circles around " + std::to_string(st.refs[0]) + " and " + std::to_string(st.refs[1]) +
                        " do not meet when placing " + std::to_string(st.vertex)};
    const double h = std::sqrt(std::max(h2, 0.0));
    const Point2 p1{a[0] + x * ux - h * uy, a[1] + x * uy + h * ux};
    const Point2 p2{a[0] + x * ux + h * uy, a[1] + x * uy - h * ux};
    const double e1 = std::abs(dist2(p1, c) - rc2) / rc2;
    const double e2 = std::abs(dist2(p2, c) - rc2) / rc2;
    const bool m1 = e1 <= 1e-6, m2 = e2 <= 1e-6;
    if (!m1 && !m2)
      return Infeasible{"distance to " + std::to_string(st.refs[2]) + " inconsistent when placing " +
                        std::to_string(st.vertex)};
    if (m1 && m2 && h > 1e-9 * std::sqrt(ra2)) emb.non_generic = true;
    pts[st.vertex - 1] = e1 <= e2 ? p1 : p2;
  }

  // Every determined distance, including those unused for placement.
  for (const auto& [e, v] : d) {
    const double got = std::sqrt(dist2(pts[e.u - 1], pts[e.v - 1]));
    const double want = std::sqrt(v);
    if (std::abs(got - want) > 1e-6 * want)
      return Infeasible{"distance " + e.label() + " inconsistent after placement"};
  }
  for (const Edge& e : s.graph.edges()) {
    const double want = std::sqrt(d.at(e));
    const double got = std::sqrt(dist2(pts[e.u - 1], pts[e.v - 1]));
    emb.max_residual = std::max(emb.max_residual, std::abs(got - want) / want);
  }
  emb.points = std::move(pts);
  emb.orientation = 1;
  return emb;
}

double bordered_minor(const std::vector<Point2>& points, const std::vector<int>& verts) {
  const int k = static_cast<int>(verts.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int i = 1; i <= k; ++i) m(0, i) = m(i, 0) = 1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) m(i + 1, j + 1) = dist2(points.at(verts[i] - 1), points.at(verts[j] - 1));
  return m.determinant();
}

CayleyMengerReport verify_cayley_menger(const std::vector<Point2>& points, double tol) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::invalid_argument("need at least three points");
  CayleyMengerReport rep;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, n + 1);
  double maxsq = 0;
  for (int i = 1; i <= n; ++i) b(0, i) = b(i, 0) = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        b(i + 1, j + 1) = dist2(points[i], points[j]);
        maxsq = std::max(maxsq, b(i + 1, j + 1));
      }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) {
    rep.singular_values.push_back(sv[i]);
    if (sv[i] > tol * sv[0]) ++rep.rank;
  }
  rep.rank_ok = rep.rank == std::min(4, n + 1);
  if (maxsq <= 0) maxsq = 1;

  rep.signs_ok = true;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      if (bordered_minor(points, {i, j}) < 0) rep.signs_ok = false;
      for (int k = j + 1; k <= n; ++k)
        if (bordered_minor(points, {i, j, k}) > tol * maxsq * maxsq) rep.signs_ok = false;
    }
  // Enumerate 4- and 5-subsets.
  std::vector<int> idx;
  auto visit = [&](auto&& self, int start, int size) -> void {
    if (static_cast<int>(idx.size()) == size) {
      const double v = std::abs(bordered_minor(points, idx)) / std::pow(maxsq, size - 1);
      double& slot = size == 4 ? rep.max_minor_4 : rep.max_minor_5;
      slot = std::max(slot, v);
      return;
    }
    for (int v = start; v <= n; ++v) {
      idx.push_back(v);
      self(self, v + 1, size);
      idx.pop_back();
    }
  };
  visit(visit, 1, 4);
  visit(visit, 1, 5);
  rep.vanishing_ok = rep.max_minor_4 <= tol && rep.max_minor_5 <= tol;
  return rep;
}

Embedding mirrored(const Embedding& e) {
  Embedding m = e;
  for (auto& p : m.points) p[1] = -p[1];
  m.orientation = -e.orientation;
  return m;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace

std::string export_svg(const std::vector<Embedding>& embeddings, const SvgOptions& opts) {
  if (embeddings.empty()) throw std::invalid_argument("nothing to render");
  std::vector<Embedding> cells;
  for (const auto& e : embeddings) {
    cells.push_back(e);
    if (opts.mirror) cells.push_back(mirrored(e));
  }
  const int count = static_cast<int>(cells.size());
  int cols = opts.columns > 0 ? opts.columns : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  cols = std::min(cols, count);
  const int rows = (count + cols - 1) / cols;
  const int cell = opts.cell;
  const int header = opts.title.empty() ? 0 : 24;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cols * cell << "\" height=\""
      << rows * cell + header << "\" viewBox=\"0 0 " << cols * cell << " " << rows * cell + header << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << cols * cell << "\" height=\"" << rows * cell + header
      << "\" fill=\"white\"/>\n";
  if (header)
    out << "<text x=\"8\" y=\"17\" font-family=\"sans-serif\" font-size=\"14\">" << opts.title << "</text>\n";
  const double pad = 0.12 * cell;
  for (int c = 0; c < count; ++c) {
    const Embedding& e = cells[c];
    const double ox = (c % cols) * cell, oy = (c / cols) * cell + header;
    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    for (const auto& p : e.points) {
      minx = std::min(minx, p[0]);
      maxx = std::max(maxx, p[0]);
      miny = std::min(miny, p[1]);
      maxy = std::max(maxy, p[1]);
    }
    const double span = std::max({maxx - minx, maxy - miny, 1e-12});
    const double scale = (cell - 2 * pad) / span;
    const double cx = (minx + maxx) / 2, cy = (miny + maxy) / 2;
    auto px = [&](const Point2& p) { return ox + cell / 2.0 + (p[0] - cx) * scale; };
    auto py = [&](const Point2& p) { return oy + cell / 2.0 - (p[1] - cy) * scale; };
    out << "<g id=\"mode-" << c + 1 << "\">\n"
        << "<rect x=\"" << fmt(ox + 1) << "\" y=\"" << fmt(oy + 1) << "\" width=\"" << cell - 2 << "\" height=\""
        << cell - 2 << "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n"
        << "<text x=\"" << fmt(ox + 6) << "\" y=\"" << fmt(oy + 16)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">" << c + 1 << "</text>\n";
    for (const Edge& ed : e.graph.edges()) {
      const Point2& a = e.points[ed.u - 1];
      const Point2& b = e.points[ed.v - 1];
      out << "<line x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(a)) << "\" x2=\"" << fmt(px(b)) << "\" y2=\""
          << fmt(py(b)) << "\" stroke=\"#1f4e79\" stroke-width=\"2\"/>\n";
    }
    for (std::size_t v = 0; v < e.points.size(); ++v) {
      const Point2& p = e.points[v];
      out << "<circle cx=\"" << fmt(px(p)) << "\" cy=\"" << fmt(py(p))
          << "\" r=\"6\" fill=\"white\" stroke=\"black\"/>\n"
          << "<text x=\"" << fmt(px(p)) << "\" y=\"" << fmt(py(p) + 3.5)
          << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">" << v + 1 << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

nlohmann::json to_json(const Embedding& e) {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t v = 0; v < e.points.size(); ++v)
    pts.push_back({{"vertex", v + 1}, {"x", e.points[v][0]}, {"y", e.points[v][1]}});
  return {{"points", pts},
          {"orientation", e.orientation},
          {"max_residual", e.max_residual},
          {"non_generic", e.non_generic}};
}

}  // namespace amodes
