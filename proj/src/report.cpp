#include "pdg/report.hpp"

#include <algorithm>

namespace pdg
{

void ValidationReport::error(std::string code, std::string message,
                             std::vector<std::string> subjects)
{
    m_errors.push_back({Severity::error, std::move(code), std::move(message), std::move(subjects)});
}

void ValidationReport::warning(std::string code, std::string message,
                               std::vector<std::string> subjects)
{
    m_warnings.push_back(
        {Severity::warning, std::move(code), std::move(message), std::move(subjects)});
}

void ValidationReport::merge(const ValidationReport& other)
{
    m_errors.insert(m_errors.end(), other.m_errors.begin(), other.m_errors.end());
    m_warnings.insert(m_warnings.end(), other.m_warnings.begin(), other.m_warnings.end());
}

bool ValidationReport::has_error(const std::string& code) const
{
    return std::any_of(m_errors.begin(), m_errors.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
}

bool ValidationReport::has_warning(const std::string& code) const
{
    return std::any_of(m_warnings.begin(), m_warnings.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
}

} // namespace pdg
