#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>

#include "cetsp/geometry.hpp"

namespace cetsp {

// Optional observer for solver internals. Implementations must tolerate any
// call order; every hook has an empty default so sinks can pick events.
class TraceSink {
 public:
  virtual ~TraceSink() = default;

  virtual void merge(std::size_t left, std::size_t right, std::size_t node,
                     double dist, const Circle& proxy) {
    (void)left, (void)right, (void)node, (void)dist, (void)proxy;
  }
  virtual void expand(std::size_t node, bool point_removed) {
    (void)node, (void)point_removed;
  }
  virtual void insert(std::size_t node, std::uint64_t point, bool zero_cost,
                      double delta) {
    (void)node, (void)point, (void)zero_cost, (void)delta;
  }
  virtual void reinsert(std::uint64_t point, std::size_t circles) {
    (void)point, (void)circles;
  }
  virtual void reoptimize(std::uint64_t point, Point2 from, Point2 to) {
    (void)point, (void)from, (void)to;
  }
};

// Writes one JSON object per event, newline-delimited.
class JsonlTraceSink final : public TraceSink {
 public:
  explicit JsonlTraceSink(std::ostream& out) : out_(out) {}

  void merge(std::size_t left, std::size_t right, std::size_t node,
             double dist, const Circle& proxy) override;
  void expand(std::size_t node, bool point_removed) override;
  void insert(std::size_t node, std::uint64_t point, bool zero_cost,
              double delta) override;
  void reinsert(std::uint64_t point, std::size_t circles) override;
  void reoptimize(std::uint64_t point, Point2 from, Point2 to) override;

 private:
  std::ostream& out_;
};

}  // namespace cetsp
