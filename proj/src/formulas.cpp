#include "mapcalc/formulas.hpp"

#include "mapcalc/errors.hpp"
#include "mapcalc/expression.hpp"

#include <cmath>

namespace mapcalc {

namespace {

Vector vector_field(const json& d, const char* key, int size, double fill) {
  Vector v = Vector::Constant(size, fill);
  if (!d.contains(key)) return v;
  auto values = d.at(key).get<std::vector<double>>();
  if (static_cast<int>(values.size()) != size)
    throw ConfigError(std::string("'") + key + "' needs " + std::to_string(size) + " entries");
  for (int i = 0; i < size; ++i) v[i] = values[static_cast<std::size_t>(i)];
  return v;
}

void require_sphere(const TargetManifold& target, const std::string& kind) {
  if (!target.is_sphere()) throw ConfigError(kind + " needs a sphere target");
}

void require_circle(DomainKind domain, const std::string& kind) {
  if (domain != DomainKind::Circle) throw ConfigError(kind + " needs a circle domain");
}

}  // namespace

MapFormula make_formula(const json& d, DomainKind domain, const TargetManifold& target) {
  if (!d.is_object() || !d.contains("kind"))
    throw ConfigError("map descriptor needs a 'kind' field");
  const std::string kind = d.at("kind").get<std::string>();
  const int dim = target.ambient_dimension();
  const int domain_dim = domain == DomainKind::Circle ? 1 : 2;
  const double r = target.is_sphere() ? target.radius() : 1.0;
  try {
    if (kind == "constant") {
      Vector p = vector_field(d, "point", dim, 0.0);
      return {kind, d, [p](const Vector&) { return p; }};
    }
    if (kind == "great_circle") {
      require_sphere(target, kind);
      require_circle(domain, kind);
      double tilt = d.value("tilt", 0.0);
      return {kind, d, [r, tilt](const Vector& a) {
                Vector v(3);
                v << std::cos(a[0]), std::sin(a[0]) * std::cos(tilt),
                    std::sin(a[0]) * std::sin(tilt);
                return Vector(r * v);
              }};
    }
    if (kind == "cap_loop") {
      require_sphere(target, kind);
      require_circle(domain, kind);
      double polar = d.value("polar_angle", 0.5);
      return {kind, d, [r, polar](const Vector& a) {
                Vector v(3);
                v << std::sin(polar) * std::cos(a[0]), std::sin(polar) * std::sin(a[0]),
                    std::cos(polar);
                return Vector(r * v);
              }};
    }
    if (kind == "torus_linear") {
      if (!target.is_torus()) throw ConfigError(kind + " needs a torus target");
      Matrix w = Matrix::Zero(dim, domain_dim);
      if (d.contains("winding")) {
        const json& wj = d.at("winding");
        if (domain_dim == 1) {
          w.col(0) = vector_field(d, "winding", dim, 0.0);
        } else {
          auto rows = wj.get<std::vector<std::vector<double>>>();
          if (static_cast<int>(rows.size()) != dim)
            throw ConfigError("'winding' needs one row per target dimension");
          for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != domain_dim)
              throw ConfigError("'winding' rows need one entry per domain dimension");
            for (int j = 0; j < domain_dim; ++j)
              w(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          }
        }
      } else {
        w(0, 0) = 1.0;
      }
      Vector offset = vector_field(d, "offset", dim, 0.0);
      Vector amplitude = vector_field(d, "amplitude", dim, 0.0);
      int mode = d.value("mode", 1);
      return {kind, d, [w, offset, amplitude, mode](const Vector& a) {
                return Vector(offset + w * a + amplitude * std::sin(mode * a[0]));
              }};
    }
    if (kind == "expression") {
      auto sources = d.at("components").get<std::vector<std::string>>();
      if (static_cast<int>(sources.size()) != dim)
        throw ConfigError("'components' needs " + std::to_string(dim) + " entries");
      std::vector<Expression> exprs;
      for (const std::string& s : sources) exprs.emplace_back(s);
      bool normalize = d.value("normalize", false);
      return {kind, d, [exprs, normalize, r, domain_dim](const Vector& a) {
                Eigen::Vector3d x(a[0], domain_dim > 1 ? a[1] : 0.0, 0.0);
                Vector v(static_cast<Eigen::Index>(exprs.size()));
                for (std::size_t i = 0; i < exprs.size(); ++i)
                  v[static_cast<Eigen::Index>(i)] = exprs[i].value(x);
                if (normalize) v *= r / v.norm();
                return v;
              }};
    }
  } catch (const json::exception& e) {
    throw ConfigError("map descriptor '" + kind + "': " + e.what());
  } catch (const ParseError& e) {
    throw ConfigError("map descriptor '" + kind + "': " + e.what());
  }
  throw ConfigError("unknown map kind '" + kind + "'");
}

}  // namespace mapcalc
