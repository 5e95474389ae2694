#pragma once

// CSV readers and writers for the artifact file formats. Parse failures
// throw SpectralError(InvalidInput).

#include "starinv/graph_forward.hpp"
#include "starinv/moment_solver.hpp"
#include "starinv/weyl.hpp"

#include <iosfwd>
#include <string>

namespace starinv::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// `x,q` rows on a uniform grid over [0, pi] (uniform to 1e-9 relative).
/// The column may also be named q1, q2, ...
GridFunction read_potential(std::istream& in);
GridFunction read_potential_file(const std::string& path);
void write_potential(std::ostream& out, const GridFunction& q, const std::string& column = "q");

/// `x,q1,...,qm` rows: all edge potentials of a star graph on one grid.
StarGraphProblem read_problem(std::istream& in);
StarGraphProblem read_problem_file(const std::string& path);
void write_problem(std::ostream& out, const StarGraphProblem& problem);

/// `n,k,lambda,multiplicity`, sorted by (k, n).
SpectrumTable read_spectrum(std::istream& in);
SpectrumTable read_spectrum_file(const std::string& path);
void write_spectrum(std::ostream& out, const SpectrumTable& table);

/// `n,k,g` with literal `inf` for infinity markers.
GTable read_g_table(std::istream& in);
GTable read_g_table_file(const std::string& path);
void write_g_table(std::ostream& out, const GTable& table);

/// `t,N,K`.
void write_cauchy(std::ostream& out, const CauchyData& cauchy);

}  // namespace starinv::io
