#ifndef SGC_INSTANCE_IO_HPP
#define SGC_INSTANCE_IO_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "sgc/metpoly.hpp"

namespace sgc {

/// On-disk instance: signed graph plus per-edge weights given either as
/// cosines c or as normalized angles x = arccos(c)/pi (uniformly across the
/// file), with an optional unit-vector configuration.
struct InstanceFile {
  SignedGraph graph;
  EdgeWeights c;
  MetricVector x;
  bool given_as_x = false;
  std::optional<Eigen::MatrixXd> config;  // d x n, unit columns
};

/// Throws std::runtime_error with a message on malformed input.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

/// parse_instance(emit_instance(f)) reproduces f exactly (numbers included).
std::string emit_instance(const InstanceFile& f);

}  // namespace sgc

#endif
