#pragma once

#include <optional>
#include <string>
#include <vector>

#include "influx/graph.hpp"

namespace influx {

/// Raised on malformed input files; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error(
            line ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_number(line) {}
  std::size_t line_number;
};

/// Decimal with 17 significant digits, round-trip exact for doubles.
std::string format_double(double v);

/// Edge-list format: `src,dst,rate` per line, `#` comment lines allowed.
/// Node count is 1 + max id unless a `# nodes=<K>` header raises it.
PropagationNetwork load_edge_list(const std::string& path);
void save_edge_list(const PropagationNetwork& net, const std::string& path);

/// Optional node attributes: `node,beta,gamma` per line.
PropagationNetwork load_edge_list(const std::string& edge_path,
                                  const std::string& node_attr_path);

struct Curve {
  std::vector<double> t;
  std::vector<double> value;
};

/// Two-column CSV `t,<name>` with one header row.
Curve load_curve(const std::string& path);
void save_curve(const Curve& curve, const std::string& path,
                const std::string& value_name = "sigma");

struct DensityTable {
  std::vector<double> t;
  std::vector<std::vector<double>> rho;  // rho[m][k], k = 0..K
};

DensityTable load_density(const std::string& path);
void save_density(const DensityTable& table, const std::string& path);

/// Rate table `t,q_0,...,q_{K-1}`; NaN entries serialize as empty fields.
struct RateTable {
  std::vector<double> t;  // single row with t=0 for constant profiles
  std::vector<std::vector<double>> q;
};

void save_rate_table(const RateTable& table, const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace influx
