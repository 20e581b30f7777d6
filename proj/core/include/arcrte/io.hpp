#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcrte/forward.hpp"
#include "arcrte/reconstruct.hpp"

namespace arcrte::io {

/// Header "K,T,c,arc_id", one value row, then "k,t,value" rows for every slot.
void write_measurement(std::ostream& os, const forward::BoundaryMeasurement& m);
forward::BoundaryMeasurement read_measurement(std::istream& is);
void write_measurement(const std::string& path, const forward::BoundaryMeasurement& m);
forward::BoundaryMeasurement read_measurement(const std::string& path);

/// "triangle,cx,cy,re_q,im_q".
void write_source(std::ostream& os, const std::vector<cplx>& centroids, const reconstruct::SourceField& q);

struct SourceRow {
  int triangle;
  double cx, cy, re_q, im_q;
};
std::vector<SourceRow> read_source(std::istream& is);

struct CondRow {
  std::string variant;
  double epsilon;
  int N;
  double cond2;
};
/// "variant,epsilon,N,cond2".
void write_cond(std::ostream& os, const std::vector<CondRow>& rows);
std::vector<CondRow> read_cond(std::istream& is);

/// "M,im_norm".
void write_sweep(std::ostream& os, const std::vector<std::pair<int, double>>& rows);
std::vector<std::pair<int, double>> read_sweep(std::istream& is);

/// "node,x,re,im" for one chord trace.
void write_trace(std::ostream& os, const std::vector<double>& x, const Eigen::VectorXcd& values);

/// Throws ConfigError unless the next line equals `expected`.
void expect_header(std::istream& is, const std::string& expected, const std::string& what);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace arcrte::io
