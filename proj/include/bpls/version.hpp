#ifndef BPLS_VERSION_HPP
#define BPLS_VERSION_HPP

namespace bpls {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the artifact layout changes.
inline constexpr int kArtifactVersion = 1;

}  // namespace bpls

#endif  // BPLS_VERSION_HPP
