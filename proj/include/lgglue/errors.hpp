#pragma once

#include <stdexcept>
#include <string>

namespace lgglue {

enum class errc {
    var_mismatch,
    not_laurent,
    not_small,
    not_expandable,
    window_overflow,
    gen_mismatch,
    not_unit,
    self_reference,
    bad_substitution,
    invalid_data,
    prefactor_mismatch,
    missing_stratum,
    underdetermined,
    inconsistent,
    config_parse,
    unknown_suite,
    io_error,
};

inline const char* errc_name(errc c)
{
    switch (c) {
    case errc::var_mismatch: return "VAR_MISMATCH";
    case errc::not_laurent: return "NOT_LAURENT";
    case errc::not_small: return "NOT_SMALL";
    case errc::not_expandable: return "NOT_EXPANDABLE";
    case errc::window_overflow: return "WINDOW_OVERFLOW";
    case errc::gen_mismatch: return "GEN_MISMATCH";
    case errc::not_unit: return "NOT_UNIT";
    case errc::self_reference: return "SELF_REFERENCE";
    case errc::bad_substitution: return "BAD_SUBSTITUTION";
    case errc::invalid_data: return "INVALID_DATA";
    case errc::prefactor_mismatch: return "PREFACTOR_MISMATCH";
    case errc::missing_stratum: return "MISSING_STRATUM";
    case errc::underdetermined: return "UNDERDETERMINED";
    case errc::inconsistent: return "INCONSISTENT";
    case errc::config_parse: return "CONFIG_PARSE";
    case errc::unknown_suite: return "UNKNOWN_SUITE";
    case errc::io_error: return "IO_ERROR";
    }
    return "UNKNOWN";
}

class lg_error : public std::runtime_error {
public:
    lg_error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }
    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace lgglue
