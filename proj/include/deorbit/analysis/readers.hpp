#pragma once

// CSV ingestion for the analysis pipeline. Every file starts with a header row;
// blank lines and lines starting with '#' are skipped. Errors are DataError
// with messages of the form "<source>:<line>: <problem>".
//
//   gaze:  t,dx,dy,dz,pupil,valid
//   eeg:   t,<label>,<label>,...          (rate inferred from t unless given)
//   tlx:   [subject,]mental,physical,temporal,performance,effort,frustration
//   sus:   [subject,]q1,...,q10
//   mixed: subject,group,a,b              (group: 0/1 or pilot/civilian)

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "deorbit/analysis/eeg.hpp"
#include "deorbit/analysis/gaze.hpp"
#include "deorbit/analysis/scoring.hpp"
#include "deorbit/analysis/stats.hpp"

namespace deorbit::analysis {

std::vector<GazeSample> read_gaze_csv(std::istream& in, const std::string& source = "gaze");

std::vector<EegChannelRecord> read_eeg_csv(std::istream& in, const std::string& source = "eeg",
                                           std::optional<double> rate = std::nullopt);

template <typename Sheet>
struct Labeled {
    std::string subject;
    Sheet sheet;
};

std::vector<Labeled<TlxSheet>> read_tlx_csv(std::istream& in, const std::string& source = "tlx");
std::vector<Labeled<SusSheet>> read_sus_csv(std::istream& in, const std::string& source = "sus");
std::vector<MixedObservation> read_mixed_csv(std::istream& in, const std::string& source = "mixed");

}  // namespace deorbit::analysis
