#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "netresp/model.hpp"

namespace netresp {

void to_json(nlohmann::json& j, const HyperParams& hp);
void from_json(const nlohmann::json& j, HyperParams& hp);
void to_json(nlohmann::json& j, const ChainConfig& cc);
void from_json(const nlohmann::json& j, ChainConfig& cc);

nlohmann::json metadata_json(const PosteriorDraws& draws);

// Draw file: "NRDRAWS1", then u64 subjects, u64 edges, u64 draws, then the
// probabilities as little-endian IEEE doubles in [draw][subject][edge] order.
// Paths ending in ".csv" use the text layout instead: a header
// `draw,subject,e1,...,eL` and one row per retained draw per subject.
// Metadata goes to `<path>.json`.
void write_draws(const PosteriorDraws& draws, const std::filesystem::path& path);
PosteriorDraws read_draws(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& draws_path);

// Raw binary helpers shared with chain checkpoints.
namespace binary {
void write_u64(std::ostream& out, std::uint64_t x);
std::uint64_t read_u64(std::istream& in);
void write_doubles(std::ostream& out, const double* data, std::size_t count);
void read_doubles(std::istream& in, double* data, std::size_t count);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& in);
void write_string(std::ostream& out, const std::string& s);
std::string read_string(std::istream& in);
void write_state(std::ostream& out, const LatentState& s);
LatentState read_state(std::istream& in);
}  // namespace binary

}  // namespace netresp
