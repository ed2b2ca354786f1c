#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "reqtest/testers.hpp"

namespace reqtest {

struct CampaignSetup {
  std::string spec;
  std::string sut;
  TesterConfig config;
  int jobs = 1;
  int timeout_ms = 5000;
};

struct CampaignResult {
  std::string label;
  CampaignSetup setup;
  std::vector<AttemptReport> attempts;
  int successes = 0;
  int transport_failures = 0;
  double wall_time_ms = 0;

  double success_rate() const;  // percent
  /// Mean runs over successful attempts; 0 when none succeeded.
  double average_runs() const;
};

/// Runs cfg.attempts independent attempts, attempt i seeded with seed + i,
/// on up to `jobs` threads. Each attempt opens its own SUT session. Every
/// reported trace is re-run on the spec before returning; a mismatch throws
/// std::logic_error.
CampaignResult run_campaign(const SpecContext& ctx, const SutFactory& factory, const CampaignSetup& setup,
                            std::string label = {});

/// Report JSON; wall times only with `timing`.
std::string report_json(const SpecContext& ctx, const std::vector<CampaignResult>& results, bool timing);

/// One summary line per campaign: label, success rate, average runs.
void print_summary(std::ostream& os, const std::vector<CampaignResult>& results);

/// 0 if any attempt succeeded, 3 on any transport failure, 1 otherwise.
int campaign_exit_code(const std::vector<CampaignResult>& results);

/// The five comparison rows as (label, config) derived from `base`.
std::vector<std::pair<std::string, TesterConfig>> table1_configs(const TesterConfig& base);

}  // namespace reqtest
