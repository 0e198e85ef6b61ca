#pragma once

#include <string>
#include <vector>

namespace pdg
{

enum class Severity
{
    error,
    warning,
};

/// One finding of a validation pass. `subjects` names the offending
/// assets, edges or players in the order relevant to the finding (for a
/// cycle, the full closed path).
struct Diagnostic
{
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::vector<std::string> subjects;
};

class ValidationReport
{
public:
    void error(std::string code, std::string message, std::vector<std::string> subjects = {});
    void warning(std::string code, std::string message, std::vector<std::string> subjects = {});
    void merge(const ValidationReport& other);

    bool ok() const noexcept { return m_errors.empty(); }
    const std::vector<Diagnostic>& errors() const noexcept { return m_errors; }
    const std::vector<Diagnostic>& warnings() const noexcept { return m_warnings; }

    bool has_error(const std::string& code) const;
    bool has_warning(const std::string& code) const;

private:
    std::vector<Diagnostic> m_errors;
    std::vector<Diagnostic> m_warnings;
};

} // namespace pdg
