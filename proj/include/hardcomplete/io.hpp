#pragma once

#include "hardcomplete/gram.hpp"
#include "hardcomplete/graph.hpp"
#include "hardcomplete/matrix.hpp"

#include <iosfwd>
#include <string>

namespace hardcomplete::io {

// ---- PMX v1: `pmx n c |Ω|`, then one `i j value` line per canonical
// revealed entry (1-based, i ≤ j). Lines starting with '#' are comments;
// a nonempty header is written as one such provenance line. ----
void write_pmx(std::ostream& os, const PartialMatrix& pm, const std::string& header = "");
PartialMatrix read_pmx(std::istream& is);

// ---- DMX: `dmx rows cols`, then row-major whitespace-separated values ----
void write_dmx(std::ostream& os, const DenseMatrix& m);
DenseMatrix read_dmx(std::istream& is);

// ---- FAC v1: `fac n r`, then n rows of u, then n rows of v (square only) ----
void write_fac(std::ostream& os, const Factorization& fact);
Factorization read_fac(std::istream& is);

// ---- DIMACS graphs: `p edge n m` and `e i j` lines, 1-based ----
void write_dimacs(std::ostream& os, const Graph& g);
Graph read_dimacs(std::istream& is);

// ---- Colorings: {"k": int, "colors": [1-based ints]} ----
void write_coloring(std::ostream& os, const Coloring& f);
Coloring read_coloring(std::istream& is);

// ---- Partition instances: JSON array of weights (numbers or "p/q") ----
void write_partition_instance(std::ostream& os, const PartitionInstance& inst);
PartitionInstance read_partition_instance(std::istream& is);

// ---- Exact-one-in-k-SAT: `p eoks k n m` header, one signed-literal line per
// clause (`2 -5 7` means +x2, −x5, +x7) ----
void write_eoks(std::ostream& os, const OneInKSatInstance& inst);
OneInKSatInstance read_eoks(std::istream& is);

// ---- Gram systems: {"kind","params","labels","constraints"} JSON; a
// nonempty provenance string is stored under a "provenance" key and ignored
// on read ----
void write_gram_system(std::ostream& os, const GramConstraintSystem& sys,
                       const std::string& provenance = "");
GramConstraintSystem read_gram_system(std::istream& is);

// ---- Vector assignments: {"dim", "vectors": {label: [..]}} JSON ----
void write_vector_assignment(std::ostream& os, const VectorAssignment& va);
VectorAssignment read_vector_assignment(std::istream& is);

// Path-based conveniences; errors mention the path.
void save_text(const std::string& path, const std::string& contents);

PartialMatrix load_pmx(const std::string& path);
DenseMatrix load_dmx(const std::string& path);
Factorization load_fac(const std::string& path);
Graph load_dimacs(const std::string& path);
Coloring load_coloring(const std::string& path);
PartitionInstance load_partition_instance(const std::string& path);
OneInKSatInstance load_eoks(const std::string& path);
GramConstraintSystem load_gram_system(const std::string& path);
VectorAssignment load_vector_assignment(const std::string& path);

void save_pmx(const std::string& path, const PartialMatrix& pm);
void save_dmx(const std::string& path, const DenseMatrix& m);
void save_fac(const std::string& path, const Factorization& fact);
void save_dimacs(const std::string& path, const Graph& g);
void save_coloring(const std::string& path, const Coloring& f);
void save_partition_instance(const std::string& path, const PartitionInstance& inst);
void save_eoks(const std::string& path, const OneInKSatInstance& inst);
void save_gram_system(const std::string& path, const GramConstraintSystem& sys);
void save_vector_assignment(const std::string& path, const VectorAssignment& va);

} // namespace hardcomplete::io
