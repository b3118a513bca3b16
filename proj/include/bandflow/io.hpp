#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bandflow/pde.hpp"
#include "bandflow/traveling_wave.hpp"
#include "bandflow/verification.hpp"

namespace bandflow {

// 17 significant digits: doubles survive a text round trip bit-exactly.
std::string fmt17(double v);

void write_profile_csv(const std::string& path, const WaveProfile& profile);
std::vector<ProfileSample> read_profile_csv(const std::string& path);

std::string wave_json(const WaveSolution& wave);
void write_wave_json(const std::string& path, const WaveSolution& wave);

// Row blocks t,x,u,ux,uxx,theta, one block per snapshot.
void write_snapshots_csv(const std::string& path, const EvolveTrace& trace);

std::string trace_json(const EvolveTrace& trace);
void write_trace_json(const std::string& path, const EvolveTrace& trace);

std::string report_json(const VerificationReport& report);
void write_report_json(const std::string& path,
                       const VerificationReport& report);

// Two-column x,u CSV with a header; used for tabulated initial data.
std::pair<std::vector<double>, std::vector<double>> read_xy_csv(
    const std::string& path);

// Three-column omega,a,b CSV for tabulated coefficient pairs.
void read_coefficient_table(const std::string& path,
                            std::vector<double>& omega, std::vector<double>& a,
                            std::vector<double>& b);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bandflow
