#pragma once

#include <map>
#include <string>

namespace sysrisk {

// Acceptance bands for the experiment reports, shipped as a versioned
// key-value data file so targets stay auditable and adjustable without code
// changes. Missing file or missing keys fall back to the built-in copy of
// the same table.
class Bands {
public:
    static Bands defaults();
    static Bands load(const std::string& path); // defaults overlaid with the file

    double get(const std::string& key) const;
    int version() const { return version_; }

private:
    std::map<std::string, double> values_;
    int version_ = 1;
};

}  // namespace sysrisk
