#include "mobsig/diagram.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace mobsig {

namespace {
constexpr std::size_t kColumn = 12;
constexpr std::size_t kGutter = 12;  // timestamp, right-aligned, then a space
}  // namespace

std::string render_diagram(std::span<const TraceRecord> trace) {
  std::vector<std::string> columns = {std::string(fe::mrrm),
                                      std::string(fe::holm),
                                      std::string(fe::path_selection),
                                      std::string(fe::flow_management),
                                      std::string(fe::env),
                                      std::string(fe::daemon)};
  auto column_of = [&](const std::string& fe) {
    auto it = std::find(columns.begin(), columns.end(), fe);
    if (it != columns.end()) return static_cast<std::size_t>(it - columns.begin());
    columns.push_back(fe);
    return columns.size() - 1;
  };
  for (const auto& r : trace) {
    column_of(r.from);
    if (!r.is_annotation()) column_of(r.to);
  }
  auto center = [](std::size_t col) { return kGutter + col * kColumn + kColumn / 2; };
  const std::size_t width = kGutter + columns.size() * kColumn;

  std::string out;
  std::string header(kGutter - 5, ' ');
  header += "t_us ";
  for (const auto& name : columns) {
    const std::size_t pad = kColumn > name.size() ? kColumn - name.size() : 0;
    std::string cell = std::string(pad / 2, ' ') + name + std::string(pad - pad / 2, ' ');
    header += cell;
  }
  while (!header.empty() && header.back() == ' ') header.pop_back();
  out += header + '\n';

  for (const auto& r : trace) {
    std::string line(width, ' ');
    for (std::size_t c = 0; c < columns.size(); ++c) line[center(c)] = '|';
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%*llu", static_cast<int>(kGutter - 1),
                  static_cast<unsigned long long>(r.at));
    line.replace(0, kGutter - 1, stamp);

    const std::size_t a = center(column_of(r.from));
    std::string label;
    if (r.is_annotation()) {
      line[a] = 'o';
      label = "(" + r.msg + ")";
    } else {
      const std::size_t b = center(column_of(r.to));
      const std::size_t lo = std::min(a, b), hi = std::max(a, b);
      for (std::size_t i = lo + 1; i < hi; ++i) line[i] = '-';
      if (a < b) line[hi - 1] = '>';
      else line[lo + 1] = '<';
      label = r.msg;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "  " + label + '\n';
  }
  return out;
}

}  // namespace mobsig
