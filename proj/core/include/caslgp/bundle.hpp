#pragma once

#include <filesystem>
#include <string>

#include "caslgp/pipeline.hpp"

namespace caslgp {

/// Bundle format identifier and schema version written into every bundle.
inline constexpr const char* kBundleFormat = "caslgp-emulator";
inline constexpr int kBundleVersion = 1;

/// JSON document holding the config snapshot, training labels, classifier
/// parameters and, per cluster, members, spectrum, projection, GP
/// hyperparameters, mean and training projections. Doubles are written in
/// shortest round-trip form; GP factors are recomputed on load.
std::string emulator_to_json(const CasEmulator& emulator);
CasEmulator emulator_from_json(const std::string& text);

void save_emulator(const CasEmulator& emulator, const std::filesystem::path& path);
/// Io error for unreadable files, parse error for malformed or foreign bundles.
CasEmulator load_emulator(const std::filesystem::path& path);

}  // namespace caslgp
