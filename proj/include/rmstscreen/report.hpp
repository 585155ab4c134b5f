#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rmstscreen/bench.hpp"
#include "rmstscreen/interval.hpp"
#include "rmstscreen/iterative.hpp"
#include "rmstscreen/screening.hpp"
#include "rmstscreen/simgen.hpp"

namespace rmstscreen {

// feature,d,d1,d2,rank,selected in ranking order.
void write_screening_csv(std::ostream& out, const ScreeningResult& result,
                         const std::vector<std::string>& names);
std::string screening_summary_json(const ScreeningResult& result,
                                   const std::vector<std::string>& names, std::size_t n,
                                   std::size_t min_stratum_size, bool experimental = false);

std::string spec_json(const ScenarioSpec& spec);
std::string simulation_sidecar_json(const ScenarioSpec& spec, const GeneratedData& g);
std::string interval_sidecar_json(const ScenarioSpec& spec, const GeneratedIntervalData& g);

std::string bench_report_json(const BenchmarkReport& report);
// Aligned text with Median / IQR / Pall columns.
std::string bench_report_table(const BenchmarkReport& report);

std::string exceedance_json(const ExceedanceResult& result);
std::string exceedance_table(const ExceedanceResult& result);

}  // namespace rmstscreen
