#include "influx/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace influx {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

namespace {

double parse_double(const std::string& s, std::size_t line) {
  double v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad number '" + s + "'", line);
  return v;
}

long parse_long(const std::string& s, std::size_t line) {
  long v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0)
    throw ParseError("bad id '" + s + "'", line);
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

PropagationNetwork load_edge_list(const std::string& path) {
  auto in = open_in(path);
  std::vector<Edge> edges;
  NodeId max_node = 0;
  NodeId declared_nodes = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("nodes=");
      if (pos != std::string::npos)
        declared_nodes = static_cast<NodeId>(
            parse_long(line.substr(pos + 6), lineno));
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 3) throw ParseError("expected src,dst,rate", lineno);
    Edge e{static_cast<NodeId>(parse_long(fields[0], lineno)),
           static_cast<NodeId>(parse_long(fields[1], lineno)),
           parse_double(fields[2], lineno)};
    if (!(e.rate > 0)) throw ParseError("edge rate must be > 0", lineno);
    max_node = std::max({max_node, e.src, e.dst});
    edges.push_back(e);
  }
  NodeId count = std::max<NodeId>(declared_nodes, max_node + 1);
  if (edges.empty() && declared_nodes == 0)
    throw std::runtime_error(path + ": no edges and no '# nodes=' header");
  return PropagationNetwork(count, std::move(edges));
}

PropagationNetwork load_edge_list(const std::string& edge_path,
                                  const std::string& node_attr_path) {
  PropagationNetwork topo = load_edge_list(edge_path);
  std::vector<double> beta(topo.node_count(), 0.0),
      gamma(topo.node_count(), 0.0);
  auto in = open_in(node_attr_path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3) throw ParseError("expected node,beta,gamma", lineno);
    long id = parse_long(fields[0], lineno);
    if (id >= static_cast<long>(topo.node_count()))
      throw ParseError("node id out of range", lineno);
    beta[id] = parse_double(fields[1], lineno);
    gamma[id] = parse_double(fields[2], lineno);
  }
  return PropagationNetwork(topo.node_count(), topo.edges(), std::move(beta),
                            std::move(gamma));
}

void save_edge_list(const PropagationNetwork& net, const std::string& path) {
  auto out = open_out(path);
  out << "# nodes=" << net.node_count() << "\n";
  for (const Edge& e : net.edges())
    out << e.src << "," << e.dst << "," << format_double(e.rate) << "\n";
}

Curve load_curve(const std::string& path) {
  auto in = open_in(path);
  Curve c;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError("expected t,value", lineno);
    c.t.push_back(parse_double(fields[0], lineno));
    c.value.push_back(parse_double(fields[1], lineno));
  }
  if (c.t.empty()) throw std::runtime_error(path + ": empty curve");
  return c;
}

void save_curve(const Curve& curve, const std::string& path,
                const std::string& value_name) {
  auto out = open_out(path);
  out << "t," << value_name << "\n";
  for (std::size_t i = 0; i < curve.t.size(); ++i)
    out << format_double(curve.t[i]) << "," << format_double(curve.value[i])
        << "\n";
}

DensityTable load_density(const std::string& path) {
  auto in = open_in(path);
  DensityTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() < 2) throw ParseError("expected t,rho_0,...", lineno);
    table.t.push_back(parse_double(fields[0], lineno));
    std::vector<double> row;
    for (std::size_t k = 1; k < fields.size(); ++k)
      row.push_back(parse_double(fields[k], lineno));
    table.rho.push_back(std::move(row));
  }
  if (table.t.empty()) throw std::runtime_error(path + ": empty density");
  return table;
}

void save_density(const DensityTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "t";
  for (std::size_t k = 0; k < table.rho.front().size(); ++k)
    out << ",rho_" << k;
  out << "\n";
  for (std::size_t m = 0; m < table.t.size(); ++m) {
    out << format_double(table.t[m]);
    for (double v : table.rho[m]) out << "," << format_double(v);
    out << "\n";
  }
}

void save_rate_table(const RateTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "t";
  for (std::size_t k = 0; k < table.q.front().size(); ++k) out << ",q_" << k;
  out << "\n";
  for (std::size_t m = 0; m < table.t.size(); ++m) {
    out << format_double(table.t[m]);
    for (double v : table.q[m]) {
      out << ",";
      if (!std::isnan(v)) out << format_double(v);
    }
    out << "\n";
  }
}

}  // namespace influx
