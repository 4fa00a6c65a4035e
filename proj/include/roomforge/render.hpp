#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "roomforge/cssg.hpp"

namespace roomforge {

struct RenderOptions {
  bool relation_arrows = true;
  bool support_arrows = true;
  bool labels = true;
};

namespace detail {

// px = 100 * meters, y flipped for SVG. Fixed formatting keeps the bytes
// stable across runs and platforms.
class SvgWriter {
 public:
  SvgWriter(double width_m, double height_m) : h_(height_m) {
    add("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%s\" width=\"%s\" height=\"%s\">",
        (fmt(-0.1) + " " + fmt(-0.1) + " " + fmt(width_m + 0.2) + " " + fmt(height_m + 0.2)).c_str(),
        fmt(width_m + 0.2).c_str(), fmt(height_m + 0.2).c_str());
  }

  std::string fmt(double meters) const {
    char b[32];
    std::snprintf(b, sizeof b, "%.1f", meters * 100.0);
    return b;
  }
  std::string px(Vec2 p) const { return fmt(p.x) + "," + fmt(h_ - p.y); }

  void polygon(const std::vector<Vec2>& pts, const char* fill, const char* stroke,
               double stroke_w) {
    std::string s;
    for (const auto& p : pts) s += px(p) + " ";
    if (!s.empty()) s.pop_back();
    add("<polygon points=\"%s\" fill=\"%s\" stroke=\"%s\" stroke-width=\"%.1f\"/>", s.c_str(),
        fill, stroke, stroke_w);
  }

  void line(Vec2 a, Vec2 b, const char* stroke, double w) {
    add("<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"%s\" stroke-width=\"%.1f\"/>",
        fmt(a.x).c_str(), fmt(h_ - a.y).c_str(), fmt(b.x).c_str(), fmt(h_ - b.y).c_str(), stroke,
        w);
  }

  void text(Vec2 p, const std::string& s) {
    add("<text x=\"%s\" y=\"%s\" font-size=\"10\" font-family=\"monospace\" "
        "text-anchor=\"middle\">%s</text>",
        fmt(p.x).c_str(), fmt(h_ - p.y).c_str(), s.c_str());
  }

  std::string finish() {
    out_ += "</svg>\n";
    return out_;
  }

 private:
  template <typename... Args>
  void add(const char* f, Args... args) {
    char b[512];
    std::snprintf(b, sizeof b, f, args...);
    out_ += b;
    out_ += "\n";
  }
  double h_;
  std::string out_;
};

inline const char* layer_fill(Layer l, bool fixed) {
  if (fixed) return "#b0bec5";
  switch (l) {
    case Layer::Furniture: return "#9e9e9e";
    case Layer::SmallObject: return "#ff9800";
    case Layer::Decoration: return "#4caf50";
  }
  return "#9e9e9e";
}

}  // namespace detail

// Deterministic top-view SVG: floor, walls, labeled rotated footprints, blue
// relation arrows, yellow support links.
inline std::string render_topview(const Scene& scene, const RenderOptions& opt = {}) {
  Vec2 lo, hi;
  scene.structure.floor.bounds(lo, hi);
  detail::SvgWriter svg(hi.x - lo.x, hi.y - lo.y);
  svg.polygon(scene.structure.floor.pts, "#f7f5f0", "#37474f", 6.0);

  for (const auto& o : scene.objects) {
    auto c = o.footprint().corners();
    const char* fill = o.type == "Window"  ? "#90caf9"
                       : o.type == "Door"  ? "#8d6e63"
                                           : detail::layer_fill(o.layer, o.from_structure);
    svg.polygon({c.begin(), c.end()}, fill, "#37474f", 1.0);
    // facing tick
    Vec2 f = heading_vec(o.rotation);
    svg.line(o.position, o.position + f * std::min(0.15, o.depth / 2), "#37474f", 1.0);
  }

  if (opt.support_arrows) {
    for (const auto& o : scene.objects) {
      if (o.support.empty()) continue;
      const PlacedObject* sup = scene.find(o.support);
      if (sup) svg.line(o.position, sup->position, "#ffc107", 1.5);
    }
  }
  if (opt.relation_arrows) {
    for (const auto& r : scene.relations) {
      const PlacedObject* s = scene.find(r.subject);
      if (!s) continue;
      Vec2 to = s->position;
      if (r.target == kWallBorder || r.target == kWallCorner) {
        if (r.target == kWallBorder) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& e : scene.structure.floor.edges()) {
            Vec2 ab = e.b - e.a;
            double len2 = ab.dot(ab);
            double t = len2 == 0 ? 0 : std::clamp((s->position - e.a).dot(ab) / len2, 0.0, 1.0);
            Vec2 q = e.a + ab * t;
            if ((s->position - q).norm() < best) {
              best = (s->position - q).norm();
              to = q;
            }
          }
        } else {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& v : scene.structure.floor.pts)
            if ((s->position - v).norm() < best) {
              best = (s->position - v).norm();
              to = v;
            }
        }
      } else {
        const PlacedObject* t = scene.find(r.target);
        if (!t) continue;
        to = t->position;
      }
      svg.line(s->position, to, "#2196f3", 1.5);
    }
  }
  if (opt.labels) {
    for (const auto& o : scene.objects) {
      if (!o.support.empty()) continue;  // labels on floor objects only, keeps it readable
      svg.text(o.position, o.id);
    }
  }
  return svg.finish();
}

// DOT export: nodes are objects plus referenced structural anchors; edges are
// the satisfied explicit relations plus realized support links.
inline std::string export_scene_graph(const Scene& scene, const Rules& rules = Rules::builtin(),
                                      const Catalog& catalog = Catalog::builtin()) {
  std::set<std::string> anchors;
  std::vector<std::string> edges;
  for (const auto& r : scene.relations) {
    if (!satisfaction(scene, r, rules)) continue;
    if (is_structural_anchor(r.target)) anchors.insert(r.target);
    edges.push_back("  \"" + r.subject + "\" -> \"" + r.target + "\" [label=\"" +
                    std::string(relation_kind_name(r.kind)) + "\"];");
  }
  for (const auto& o : scene.objects) {
    if (o.support.empty()) continue;
    const PlacedObject* sup = scene.find(o.support);
    if (!sup) continue;
    bool in = catalog.get(sup->type).receptacle == Receptacle::Container;
    edges.push_back("  \"" + o.id + "\" -> \"" + sup->id + "\" [label=\"" +
                    (in ? "in" : "on") + "\"];");
  }
  std::sort(edges.begin(), edges.end());

  std::string out = "digraph scene {\n";
  for (const auto& o : scene.objects)
    out += "  \"" + o.id + "\" [label=\"" + o.id + "\\n" + o.type + "\"];\n";
  for (const auto& a : anchors) out += "  \"" + a + "\" [shape=box];\n";
  for (const auto& e : edges) out += e + "\n";
  out += "}\n";
  return out;
}

}  // namespace roomforge
