#include "spillplan/report.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/core.h>

namespace spillplan {

std::string render_table(const ReturnTable& t) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{t.stage == 2 ? "boom \\ aircraft" : "2nd \\ 1st"};
  header.insert(header.end(), t.col_labels.begin(), t.col_labels.end());
  cells.push_back(header);
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
    std::vector<std::string> row{t.row_labels[r]};
    for (std::size_t c = 0; c < t.col_labels.size(); ++c) {
      const auto& v = t.values[r][c];
      std::string cell = v ? fmt::format("{:.2f}", *v) : "*";
      if (t.optimal_cell && t.optimal_cell->first == r && t.optimal_cell->second == c) {
        cell += "<";
      }
      row.push_back(std::move(cell));
    }
    cells.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::string out = t.title + "\n";
  for (const auto& row : cells) {
    std::string line = fmt::format("{:<{}}", row[0], width[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      line += fmt::format("  {:>{}}", row[c], width[c] + 1);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  out += "(< marks the optimum; * = not evaluated, eliminated by best practice)\n";
  return out;
}

void write_trace_csv(const Scenario& s, const TrajectoryTrace& trace, std::ostream& out) {
  for (std::size_t k = 0; k < s.sector_count(); ++k) {
    out << (k ? "," : "") << s.sectors[k].id;
  }
  out << "\n";
  for (const auto& st : trace.states) {
    for (std::size_t k = 0; k < st.quantities.size(); ++k) {
      out << (k ? "," : "") << fmt::format("{:.6f}", st.quantities[k]);
    }
    out << "\n";
  }
}

std::string render_backbone(const Scenario& s, const DecisionBackbone& b) {
  std::ostringstream out;
  out << fmt::format("scenario: {} sectors, ship at {}, {} sensitive areas\n", s.sector_count(),
                     s.source, s.sensitive_targets.size());
  out << fmt::format("decision backbone: {} decision points, {} plans\n", b.points.size(),
                     b.policy_space_size());
  out << fmt::format("aircraft sortie period: {}; dispersant target: {}\n", b.decision_period,
                     b.dispersant_target);
  for (const auto& p : b.points) {
    out << fmt::format("\npoint {} (period {})\n", p.index, p.period);
    if (!p.aircraft_options.empty()) {
      out << "  aircraft:";
      for (auto a : p.aircraft_options) out << " " << to_string(a);
      out << "\n";
    }
    if (!p.observes.empty()) {
      out << "  observes:";
      for (const auto& o : p.observes) out << " " << o;
      out << "\n";
    }
    out << fmt::format("  boom actions ({}):\n", p.boom_actions.size());
    for (const auto& a : p.boom_actions) {
      out << "    " << a.label;
      if (a.assignments.empty()) out << "  (no boom)";
      for (const auto& asg : a.assignments) {
        std::string boom;
        for (const auto& [id, target] : a.placement) {
          if (target == asg.sector) boom = id;
        }
        out << fmt::format("  {}:{}x@{}[{}]", asg.sector, asg.coverage, asg.arrival_period, boom);
      }
      out << "\n";
      for (const auto& r : a.relocations) {
        out << fmt::format("      relocates {} {} -> {}, periods {} -> {}\n", r.boom, r.from, r.to,
                           r.depart_period, r.arrive_period);
      }
      for (const auto& n : a.notes) out << "      note: " << n << "\n";
    }
  }
  out << fmt::format("\npruned ({}):\n", b.pruned.size());
  for (const auto& p : b.pruned) {
    out << fmt::format("  [{}] {}: {}\n", to_string(p.reason), p.action, p.detail);
  }
  return out.str();
}

}  // namespace spillplan
