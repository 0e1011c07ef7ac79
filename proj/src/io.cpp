#include "rcnwave/io.hpp"

#include <cmath>
#include <cstdio>

namespace rcnwave {

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit(const json& j, std::string& out, int indent, int depth) {
  const auto nl = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        emit(it.value(), out, indent, depth + 1);
      }
      nl(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        nl(depth + 1);
        emit(v, out, indent, depth + 1);
      }
      nl(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no inf/nan; keep them readable as strings.
      if (!std::isfinite(x)) out += '"' + fmt17(x) + '"';
      else out += fmt17(x);
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump17(const json& j, int indent) {
  std::string out;
  emit(j, out, indent, 0);
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << fmt17(row[i]);
  }
  os << '\n';
}

}  // namespace rcnwave
