#pragma once

#include <filesystem>
#include <string>

namespace subdiff::runner {

struct RunOutcome {
    int exit_code = 0;        // 0 iff no error report was written
    std::string summary;      // one human-readable line for stdout
};

// Execute one subcommand against the scenario file at config_path, writing
// result.json, table.csv, optional *.dat series, and a ledger.csv line into
// out_dir.  Toolkit errors never escape: they become an error report in
// result.json (status = "error" with the concrete type name) plus a nonzero
// exit code, so the caller's exit status mirrors the report exactly.
RunOutcome run(const std::string& subcommand, const std::filesystem::path& config_path,
               const std::filesystem::path& out_dir, int jobs);

// Accuracy-audit table: E_alpha(z) on a uniform z-grid, written to
// mlf_table.csv under out_dir.  Shares the error-report contract with run().
RunOutcome run_mlf_table(double alpha, double z_from, double z_to, long points,
                         const std::filesystem::path& out_dir);

} // namespace subdiff::runner
