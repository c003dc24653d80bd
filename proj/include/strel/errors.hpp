#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strel {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally valid input that violates a data contract (range, duplicate, ...).
class data_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

// Exact enumeration refused: too many edges.
class edge_budget_error : public error {
 public:
  using error::error;
};

// Query asked for more sampled worlds than the index holds.
class index_too_narrow_error : public error {
 public:
  using error::error;
};

// Fewer edges reachable from the source than the requested stratum count.
class insufficient_edges_error : public error {
 public:
  using error::error;
};

// Workload generation ran out of usable source nodes.
class workload_exhausted_error : public error {
 public:
  using error::error;
};

// Convergence loop hit its step cap.
class non_convergent_error : public error {
 public:
  using error::error;
};

// Relative error against a baseline that is zero for some pair.
class zero_baseline_error : public error {
 public:
  using error::error;
};

// Tree decomposition width above the lossless bound without the lossy flag.
class lossy_width_error : public error {
 public:
  using error::error;
};

class bad_argument : public error {
 public:
  using error::error;
};

}  // namespace strel
