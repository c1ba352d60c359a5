#pragma once

#include "lzeta/numerics.hpp"
#include "lzeta/oracle.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace lzeta {

/// Pole table. Without scan results every status reads CANDIDATE and the
/// residue columns are empty. An entire representation prints `# ENTIRE`
/// after the header and no rows.
void write_catalog(std::ostream& out, const PoleCatalog& catalog, const std::vector<ScannedPole>* scan = nullptr);

/// One row per Laurent coefficient c_{-j} of every scanned candidate.
void write_residues(std::ostream& out, const std::vector<ScannedPole>& scan);

/// `z_re,z_im,F_re,F_im,err_est` rows.
void write_values(std::ostream& out, const std::vector<FValue>& values);

/// `z_re,|F|` rows along the real axis.
void write_plot(std::ostream& out, const std::vector<FValue>& values);

void write_verify(std::ostream& out, const VerifyReport& report);

/// Fixed scientific notation used in every numeric column.
std::string format_number(double v);

}  // namespace lzeta
