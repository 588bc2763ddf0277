#include "cetsp/trace.hpp"

#include <cstdio>
#include <string>

namespace cetsp {

namespace {

// Shortest representation that round-trips a double.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void JsonlTraceSink::merge(std::size_t left, std::size_t right,
                           std::size_t node, double dist,
                           const Circle& proxy) {
  out_ << "{\"event\":\"merge\",\"left\":" << left << ",\"right\":" << right
       << ",\"node\":" << node << ",\"distance\":" << num(dist)
       << ",\"proxy\":{\"x\":" << num(proxy.center.x)
       << ",\"y\":" << num(proxy.center.y) << ",\"r\":" << num(proxy.radius)
       << "}}\n";
}

void JsonlTraceSink::expand(std::size_t node, bool point_removed) {
  out_ << "{\"event\":\"expand\",\"node\":" << node
       << ",\"point_removed\":" << (point_removed ? "true" : "false") << "}\n";
}

void JsonlTraceSink::insert(std::size_t node, std::uint64_t point,
                            bool zero_cost, double delta) {
  out_ << "{\"event\":\"insert\",\"node\":" << node << ",\"point\":" << point
       << ",\"zero_cost\":" << (zero_cost ? "true" : "false")
       << ",\"delta\":" << num(delta) << "}\n";
}

void JsonlTraceSink::reinsert(std::uint64_t point, std::size_t circles) {
  out_ << "{\"event\":\"reinsert\",\"point\":" << point
       << ",\"circles\":" << circles << "}\n";
}

void JsonlTraceSink::reoptimize(std::uint64_t point, Point2 from, Point2 to) {
  out_ << "{\"event\":\"reoptimize\",\"point\":" << point
       << ",\"from\":[" << num(from.x) << "," << num(from.y) << "],\"to\":["
       << num(to.x) << "," << num(to.y) << "]}\n";
}

}  // namespace cetsp
