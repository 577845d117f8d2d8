#include "mapcalc/io.hpp"

#include "mapcalc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mapcalc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trailing characters in '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trailing characters in '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

json header_of(const SampledMap& f, const std::string& kind) {
  return json{{"kind", kind},
              {"atlas", f.atlas().to_json()},
              {"target", f.target().to_json()},
              {"resolution", f.resolution()}};
}

void write_rows(std::ofstream& out, const SampledMap& f, const PullbackSection* s) {
  const int dim = f.target().ambient_dimension();
  out << "chart_id,node,i0,i1";
  for (int d = 0; d < dim; ++d) out << ",p" << d;
  if (s)
    for (int d = 0; d < dim; ++d) out << ",v" << d;
  out << '\n';
  for (int c = 0; c < f.atlas().chart_count(); ++c) {
    const ChartGrid& g = f.grid(c);
    for (int node = 0; node < g.node_count(); ++node) {
      auto ij = g.unravel(node);
      out << c << ',' << node << ',' << ij[0] << ',' << ij[1];
      const Matrix& p = f.chart_values(c);
      for (int d = 0; d < dim; ++d) out << ',' << fmt(p(d, node));
      if (s) {
        const Matrix& v = s->chart_vectors(c);
        for (int d = 0; d < dim; ++d) out << ',' << fmt(v(d, node));
      }
      out << '\n';
    }
  }
}

struct ParsedTable {
  json header;
  std::vector<Matrix> points;
  std::vector<Matrix> vectors;
};

ParsedTable read_table(const std::string& path, bool with_vectors) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw ParseError("missing '# {header}' line in '" + path + "'");
  ParsedTable t;
  try {
    t.header = json::parse(line.substr(2));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad header: ") + e.what());
  }
  try {
    DomainAtlas atlas = DomainAtlas::from_json(t.header.at("atlas"));
    TargetManifold target = TargetManifold::from_json(t.header.at("target"));
    int resolution = t.header.at("resolution").get<int>();
    const int dim = target.ambient_dimension();
    for (int c = 0; c < atlas.chart_count(); ++c) {
      int nodes = atlas.grid(c, resolution).node_count();
      t.points.push_back(Matrix::Constant(dim, nodes, std::nan("")));
      t.vectors.push_back(Matrix::Constant(dim, nodes, std::nan("")));
    }
    if (!std::getline(in, line)) throw ParseError("missing column header");
    const std::size_t columns = 4 + static_cast<std::size_t>(dim) * (with_vectors ? 2 : 1);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = split(line);
      if (cells.size() != columns) throw ParseError("wrong column count: " + line);
      int c = parse_int(cells[0]);
      int node = parse_int(cells[1]);
      if (c < 0 || c >= atlas.chart_count() || node < 0 ||
          node >= t.points[static_cast<std::size_t>(c)].cols())
        throw ParseError("node out of range: " + line);
      for (int d = 0; d < dim; ++d) {
        t.points[static_cast<std::size_t>(c)](d, node) =
            parse_double(cells[4 + static_cast<std::size_t>(d)]);
        if (with_vectors)
          t.vectors[static_cast<std::size_t>(c)](d, node) =
              parse_double(cells[4 + static_cast<std::size_t>(dim + d)]);
      }
    }
    for (const Matrix& m : t.points)
      if (!m.allFinite()) throw ParseError("file does not list every node");
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad header field: ") + e.what());
  }
  return t;
}

SampledMap map_from(const ParsedTable& t) {
  return SampledMap(DomainAtlas::from_json(t.header.at("atlas")),
                    TargetManifold::from_json(t.header.at("target")),
                    t.header.at("resolution").get<int>(), t.points);
}

}  // namespace

void write_map_csv(const SampledMap& f, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# " << header_of(f, "sampled_map").dump() << '\n';
  write_rows(out, f, nullptr);
  finish(out, path);
}

SampledMap read_map_csv(const std::string& path) {
  return map_from(read_table(path, false));
}

void write_section_csv(const PullbackSection& s, const std::string& path) {
  std::ofstream out = open_out(path);
  json header = header_of(s.base_map(), "pullback_section");
  header["bound"] = s.bound();
  out << "# " << header.dump() << '\n';
  write_rows(out, s.base_map(), &s);
  finish(out, path);
}

PullbackSection read_section_csv(const std::string& path) {
  ParsedTable t = read_table(path, true);
  double bound = 0.0;
  try {
    bound = t.header.at("bound").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("section header lacks a bound: ") + e.what());
  }
  return PullbackSection(share(map_from(t)), t.vectors, bound);
}

void write_trace_csv(const DescentTrace& trace, const std::string& path) {
  if (trace.rows.empty()) throw InvalidArgument("cannot write an empty trace");
  std::ofstream out = open_out(path);
  out << "step,energy,grad_norm,step_size\n";
  for (const TraceRow& r : trace.rows)
    out << r.step << ',' << fmt(r.energy) << ',' << fmt(r.grad_norm) << ','
        << fmt(r.step_size) << '\n';
  finish(out, path);
}

DescentTrace read_trace_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "step,energy,grad_norm,step_size")
    throw ParseError("'" + path + "' is not a descent trace");
  DescentTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != 4) throw ParseError("wrong column count: " + line);
    trace.rows.push_back({parse_int(cells[0]), parse_double(cells[1]),
                          parse_double(cells[2]), parse_double(cells[3])});
  }
  // The file holds accepted steps only; the first row stands in for the start.
  if (!trace.rows.empty()) trace.initial_energy = trace.rows.front().energy;
  return trace;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace mapcalc
