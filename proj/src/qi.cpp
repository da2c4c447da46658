#include "relhyp/qi.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace relhyp {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) fail(ErrorCode::Invalid, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

nlohmann::json condition_json(const QICondition& c) {
  return {{"pass", c.pass},
          {"worst_defect", c.worst_defect},
          {"witness", c.witness},
          {"witness_payloads", c.witness_text}};
}

void render_witness(QICondition& c, const LabeledGraph& g) {
  c.witness_text.clear();
  for (int v : c.witness) c.witness_text.push_back(g.vertex(v).text);
}

}  // namespace

std::string QIVerdict::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda.str();
  j["c"] = additive.str();
  j["epsilon"] = epsilon.str();
  j["lower"] = condition_json(lower);
  j["upper"] = condition_json(upper);
  j["density"] = condition_json(density);
  j["checked_pairs"] = checked_pairs;
  j["skipped_pairs"] = skipped_pairs;
  j["pass"] = pass();
  j["note"] = note;
  return j.dump(2);
}

QIVerdict check_qi_map(const LabeledGraph& g1, const LabeledGraph& g2,
                       const std::vector<int>& alpha, Rational lambda, Rational additive,
                       Rational epsilon) {
  if (static_cast<int>(alpha.size()) != g1.vertex_count())
    fail(ErrorCode::Invalid, "map must be defined on every source vertex");
  for (int im : alpha)
    if (im < 0 || im >= g2.vertex_count())
      fail(ErrorCode::Invalid, "map image outside the target graph");
  if (lambda.num <= 0) fail(ErrorCode::Invalid, "lambda must be positive");

  QIVerdict v;
  v.lambda = lambda;
  v.additive = additive;
  v.epsilon = epsilon;
  const std::int64_t s1 = g1.meta().scale, s2 = g2.meta().scale;
  const std::int64_t ln = lambda.num, ld = lambda.den, cn = additive.num, cd = additive.den;

  const int n1 = g1.vertex_count();
  for (int u = 0; u < n1; ++u) {
    auto row1 = g1.dist_row(u);
    auto row2 = g2.dist_row(alpha[static_cast<size_t>(u)]);
    for (int w = u + 1; w < n1; ++w) {
      std::int64_t d1 = (*row1)[static_cast<size_t>(w)];
      std::int64_t d2 = (*row2)[static_cast<size_t>(alpha[static_cast<size_t>(w)])];
      ++v.checked_pairs;
      // d1/(lambda s1) - c <= d2/s2, cross-multiplied by s1 s2 ln cd > 0.
      std::int64_t lower_defect = d1 * ld * cd * s2 - cn * ln * s1 * s2 - d2 * ln * cd * s1;
      if (lower_defect > v.lower.worst_defect ||
          (lower_defect == v.lower.worst_defect && v.lower.witness.empty())) {
        v.lower.worst_defect = lower_defect;
        v.lower.witness = {u, w};
      }
      if (lower_defect > 0) v.lower.pass = false;
      // d2/s2 <= lambda d1/s1 + c, cross-multiplied by s1 s2 ld cd > 0.
      std::int64_t upper_defect = d2 * s1 * ld * cd - ln * d1 * cd * s2 - cn * s1 * s2 * ld;
      if (upper_defect > v.upper.worst_defect ||
          (upper_defect == v.upper.worst_defect && v.upper.witness.empty())) {
        v.upper.worst_defect = upper_defect;
        v.upper.witness = {u, w};
      }
      if (upper_defect > 0) v.upper.pass = false;
    }
  }

  std::vector<char> is_image(static_cast<size_t>(g2.vertex_count()), 0);
  for (int im : alpha) is_image[static_cast<size_t>(im)] = 1;
  for (int z = 0; z < g2.vertex_count(); ++z) {
    auto row = g2.dist_row(z);
    std::int64_t best = -1;
    for (int y = 0; y < g2.vertex_count(); ++y)
      if (is_image[static_cast<size_t>(y)] && (best < 0 || (*row)[static_cast<size_t>(y)] < best))
        best = (*row)[static_cast<size_t>(y)];
    if (best < 0) {
      v.density.pass = false;
      continue;
    }
    // best/s2 <= epsilon
    std::int64_t defect = best * epsilon.den - epsilon.num * s2;
    if (defect > v.density.worst_defect ||
        (defect == v.density.worst_defect && v.density.witness.empty())) {
      v.density.worst_defect = defect;
      v.density.witness = {z};
    }
    if (defect > 0) v.density.pass = false;
  }
  render_witness(v.lower, g1);
  render_witness(v.upper, g1);
  render_witness(v.density, g2);
  return v;
}

std::string EqdefReport::to_json() const {
  nlohmann::json j;
  j["alpha"] = nlohmann::json::parse(alpha.to_json());
  j["provisional"] = provisional;
  j["coned_applicable"] = coned_applicable;
  if (coned_applicable) j["iota"] = nlohmann::json::parse(iota.to_json());
  j["pass"] = pass();
  j["note"] = note;
  return j.dump(2);
}

EqdefReport eqdef_check(const GroupPtr& group, const std::vector<std::string>& x_names,
                        const std::vector<SubgroupSpec>& parabolics, const BallParams& p) {
  if (parabolics.empty()) fail(ErrorCode::Invalid, "eqdef check needs parabolics");
  EqdefReport rep;
  rep.relative = relative_ball(group, x_names, parabolics, p);
  rep.coset = coset_ball(group, x_names, parabolics, p);
  rep.provisional = !(rep.relative.meta().exact && rep.coset.meta().exact);
  rep.note =
      "lambda = 2, c = 1/2: substituting the two displayed inequalities into the "
      "quasi-isometry definition forces these constants (the text's lambda = c = 1/2 "
      "does not satisfy the definition as stated); ";

  QIVerdict& v = rep.alpha;
  v.lambda = Rational(2, 1);
  v.additive = Rational(1, 2);
  v.epsilon = Rational(1, 1);

  auto sub0 = group->parabolic(parabolics[0]);
  const int n = rep.relative.vertex_count();
  std::vector<int> image(static_cast<size_t>(n), -1);
  for (int u = 0; u < n; ++u) {
    Word repw = sub0.left_rep(rep.relative.vertex(u).word);
    image[static_cast<size_t>(u)] =
        rep.coset.find_vertex("H0|" + format_word(repw));
  }

  const std::int64_t s1 = rep.relative.meta().scale, s2 = rep.coset.meta().scale;
  for (int u = 0; u < n; ++u) {
    if (image[static_cast<size_t>(u)] < 0) {
      v.skipped_pairs += static_cast<size_t>(n - 1 - u);
      continue;
    }
    auto row1 = rep.relative.dist_row(u);
    auto row2 = rep.coset.dist_row(image[static_cast<size_t>(u)]);
    for (int w = u + 1; w < n; ++w) {
      if (image[static_cast<size_t>(w)] < 0) {
        ++v.skipped_pairs;
        continue;
      }
      std::int64_t d1 = (*row1)[static_cast<size_t>(w)];
      std::int64_t d2 = (*row2)[static_cast<size_t>(image[static_cast<size_t>(w)])];
      ++v.checked_pairs;
      // Eq. (1): d_coset <= 2 d_rel.
      std::int64_t upper_defect = d2 * s1 - 2 * d1 * s2;
      if (upper_defect > v.upper.worst_defect ||
          (upper_defect == v.upper.worst_defect && v.upper.witness.empty())) {
        v.upper.worst_defect = upper_defect;
        v.upper.witness = {u, w};
      }
      if (upper_defect > 0) v.upper.pass = false;
      // Eq. (2): d_rel / 2 - 1/2 <= d_coset.
      std::int64_t lower_defect = d1 * s2 - s1 * s2 - 2 * d2 * s1;
      if (lower_defect > v.lower.worst_defect ||
          (lower_defect == v.lower.worst_defect && v.lower.witness.empty())) {
        v.lower.worst_defect = lower_defect;
        v.lower.witness = {u, w};
      }
      if (lower_defect > 0) v.lower.pass = false;
    }
  }

  // Density 1 over the coset-ball interior: boundary cosets may only have
  // witnesses beyond the truncated alpha domain.
  std::vector<char> is_image(static_cast<size_t>(rep.coset.vertex_count()), 0);
  for (int im : image)
    if (im >= 0) is_image[static_cast<size_t>(im)] = 1;
  auto root_row = rep.coset.dist_row(0);
  for (int z = 0; z < rep.coset.vertex_count(); ++z) {
    if ((*root_row)[static_cast<size_t>(z)] > static_cast<std::int64_t>(p.radius - 1) * s2)
      continue;
    auto row = rep.coset.dist_row(z);
    std::int64_t best = -1;
    for (int y = 0; y < rep.coset.vertex_count(); ++y)
      if (is_image[static_cast<size_t>(y)] && (best < 0 || (*row)[static_cast<size_t>(y)] < best))
        best = (*row)[static_cast<size_t>(y)];
    std::int64_t defect = best < 0 ? 1 : best - s2;  // epsilon = 1 true unit
    if (defect > v.density.worst_defect ||
        (defect == v.density.worst_defect && v.density.witness.empty())) {
      v.density.worst_defect = defect;
      v.density.witness = {z};
    }
    if (defect > 0) v.density.pass = false;
  }
  render_witness(v.lower, rep.relative);
  render_witness(v.upper, rep.relative);
  render_witness(v.density, rep.coset);

  // The identity embedding into the coned-off ball, when X generates.
  try {
    rep.coned = coned_off_ball(group, x_names, parabolics, p);
    rep.coned_applicable = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unsupported) throw;
    rep.coned_applicable = false;
    rep.note += "coned-off comparison skipped: ";
    rep.note += e.what();
    rep.note += "; ";
  }
  if (rep.coned_applicable) {
    QIVerdict& iv = rep.iota;
    iv.lambda = Rational(1, 1);
    iv.additive = Rational(0, 1);
    iv.epsilon = Rational(1, 1);
    const std::int64_t sc = rep.coned.meta().scale;
    std::vector<int> iota(static_cast<size_t>(n), -1);
    for (int u = 0; u < n; ++u)
      iota[static_cast<size_t>(u)] = rep.coned.find_vertex(rep.relative.vertex(u).key);
    std::vector<char> hit(static_cast<size_t>(rep.coned.vertex_count()), 0);
    for (int u = 0; u < n; ++u) {
      if (iota[static_cast<size_t>(u)] < 0) {
        iv.skipped_pairs += static_cast<size_t>(n - 1 - u);
        continue;
      }
      hit[static_cast<size_t>(iota[static_cast<size_t>(u)])] = 1;
      auto row1 = rep.relative.dist_row(u);
      auto rowc = rep.coned.dist_row(iota[static_cast<size_t>(u)]);
      for (int w = u + 1; w < n; ++w) {
        if (iota[static_cast<size_t>(w)] < 0) {
          ++iv.skipped_pairs;
          continue;
        }
        std::int64_t d1 = (*row1)[static_cast<size_t>(w)];
        std::int64_t dc = (*rowc)[static_cast<size_t>(iota[static_cast<size_t>(w)])];
        ++iv.checked_pairs;
        std::int64_t defect = dc * s1 - d1 * sc;  // isometric: equality both ways
        if (defect > iv.upper.worst_defect) {
          iv.upper.worst_defect = defect;
          iv.upper.witness = {u, w};
        }
        if (defect > 0) iv.upper.pass = false;
        if (-defect > iv.lower.worst_defect) {
          iv.lower.worst_defect = -defect;
          iv.lower.witness = {u, w};
        }
        if (defect < 0) iv.lower.pass = false;
      }
    }
    for (int z = 0; z < rep.coned.vertex_count(); ++z) {
      auto row = rep.coned.dist_row(z);
      std::int64_t best = -1;
      for (int y = 0; y < rep.coned.vertex_count(); ++y)
        if (hit[static_cast<size_t>(y)] && (best < 0 || (*row)[static_cast<size_t>(y)] < best))
          best = (*row)[static_cast<size_t>(y)];
      std::int64_t defect = best < 0 ? 1 : best - sc;
      if (defect > iv.density.worst_defect) {
        iv.density.worst_defect = defect;
        iv.density.witness = {z};
      }
      if (defect > 0) iv.density.pass = false;
    }
    render_witness(iv.lower, rep.relative);
    render_witness(iv.upper, rep.relative);
    render_witness(iv.density, rep.coned);
  }
  return rep;
}

std::string LipschitzReport::to_json() const {
  nlohmann::json j;
  j["M_forward"] = m_forward.str();
  j["M_backward"] = m_backward.str();
  j["forward_ok"] = forward_ok;
  j["backward_ok"] = backward_ok;
  j["backward_checked"] = backward_checked;
  j["bijective"] = bijective;
  j["classes_constant"] = classes_constant;
  j["pass"] = pass();
  nlohmann::json cls = nlohmann::json::array();
  for (const auto& [label, disp] : class_displacements)
    cls.push_back({{"label", label}, {"displacement", disp.str()}});
  j["classes"] = std::move(cls);
  j["note"] = note;
  return j.dump(2);
}

namespace {

// Lipschitz half of the Svarc-Milnor style bound for one direction.
void lipschitz_direction(const LabeledGraph& g1, const LabeledGraph& g2,
                         const std::vector<int>& to_g2, Rational& m_out, bool& ok,
                         bool& classes_constant,
                         std::vector<std::pair<std::string, Rational>>* table) {
  const std::int64_t s1 = g1.meta().scale, s2 = g2.meta().scale;
  std::map<std::string, Rational> displacement;
  for (const GraphEdge& e : g1.edges()) {
    std::int64_t d2 =
        (*g2.dist_row(to_g2[static_cast<size_t>(e.u)]))[static_cast<size_t>(
            to_g2[static_cast<size_t>(e.v)])];
    Rational disp(d2 * s1, static_cast<std::int64_t>(e.length) * s2);
    auto [it, fresh] = displacement.emplace(e.label.text, disp);
    if (!fresh && !(it->second == disp)) {
      classes_constant = false;
      if (disp < it->second) continue;
      it->second = disp;  // keep the worst representative honest
    }
  }
  Rational m(0, 1);
  for (const auto& [label, disp] : displacement) {
    if (m < disp) m = disp;
    if (table) table->emplace_back(label, disp);
  }
  m_out = m;
  ok = true;
  const int n = g1.vertex_count();
  for (int u = 0; u < n && ok; ++u) {
    auto row1 = g1.dist_row(u);
    auto row2 = g2.dist_row(to_g2[static_cast<size_t>(u)]);
    for (int w = u + 1; w < n; ++w) {
      std::int64_t d1 = (*row1)[static_cast<size_t>(w)];
      std::int64_t d2 = (*row2)[static_cast<size_t>(to_g2[static_cast<size_t>(w)])];
      // d2/s2 <= M d1/s1
      if (d2 * s1 * m.den > m.num * d1 * s2) {
        ok = false;
        break;
      }
    }
  }
}

}  // namespace

LipschitzReport lipschitz_orbit_bound(const LabeledGraph& g1, const LabeledGraph& g2,
                                      const std::vector<int>& beta, bool check_backward) {
  if (static_cast<int>(beta.size()) != g1.vertex_count())
    fail(ErrorCode::Invalid, "beta must be defined on every vertex of the first graph");
  for (int im : beta)
    if (im < 0 || im >= g2.vertex_count())
      fail(ErrorCode::Invalid, "beta image outside the second graph");

  LipschitzReport rep;
  lipschitz_direction(g1, g2, beta, rep.m_forward, rep.forward_ok, rep.classes_constant,
                      &rep.class_displacements);
  if (!rep.classes_constant)
    rep.note += "some label class has non-constant displacement; ";

  if (check_backward) {
    rep.backward_checked = true;
    std::vector<int> inverse_map(static_cast<size_t>(g2.vertex_count()), -1);
    rep.bijective = g1.vertex_count() == g2.vertex_count();
    for (int u = 0; u < g1.vertex_count() && rep.bijective; ++u) {
      if (inverse_map[static_cast<size_t>(beta[static_cast<size_t>(u)])] >= 0)
        rep.bijective = false;
      else
        inverse_map[static_cast<size_t>(beta[static_cast<size_t>(u)])] = u;
    }
    if (rep.bijective) {
      bool dummy_const = true;
      lipschitz_direction(g2, g1, inverse_map, rep.m_backward, rep.backward_ok, dummy_const,
                          nullptr);
    } else {
      rep.note += "beta is not a bijection on vertices; not a quasi-isometry; ";
    }
  }
  return rep;
}

}  // namespace relhyp
