#ifndef GROUPAUDIT_ERRORS_HPP
#define GROUPAUDIT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace groupaudit {

class AuditError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration (missing paths, overlapping lexicon sets...).
class ConfigError : public AuditError {
public:
    using AuditError::AuditError;
};

// A group stream ended with fewer records than the per-group quota.
class InsufficientData : public AuditError {
public:
    InsufficientData(std::string group, std::size_t have, std::size_t need)
        : AuditError("insufficient data for group " + group + ": have " +
                     std::to_string(have) + ", need " + std::to_string(need)),
          group(std::move(group)), have(have), need(need) {}

    std::string group;
    std::size_t have;
    std::size_t need;
};

// A column with zero variance cannot be standardized.
class DegenerateColumn : public AuditError {
public:
    using AuditError::AuditError;
};

// Records are missing sentiment labels required for the design matrix.
class IncompleteDataset : public AuditError {
public:
    using AuditError::AuditError;
};

// The outcome is perfectly separated by the linear predictor; the MLE
// does not exist and coefficients diverge.
class PerfectSeparation : public AuditError {
public:
    using AuditError::AuditError;
};

class SingularDesign : public AuditError {
public:
    SingularDesign(std::string msg, std::vector<std::string> columns)
        : AuditError(std::move(msg)), columns(std::move(columns)) {}

    std::vector<std::string> columns;
};

class NonConverged : public AuditError {
public:
    using AuditError::AuditError;
};

// Remote classifier returned a response we cannot interpret.
class ProtocolError : public AuditError {
public:
    using AuditError::AuditError;
};

// Remote batch failed after retries; carries the labels obtained so far.
class BatchFailed : public AuditError {
public:
    BatchFailed(std::string msg, std::vector<std::string> partial)
        : AuditError(std::move(msg)), partial(std::move(partial)) {}

    std::vector<std::string> partial;
};

}  // namespace groupaudit

#endif
