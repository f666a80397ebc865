#pragma once

#include <hipn/net.hpp>

#include <string>
#include <string_view>

namespace hipn {

// Line-oriented net text:
//   places: p1 p2 p3          left to right is bottom to top of the hierarchy
//   marking: p1=3 p2=0        omitted places hold 0
//   trans t1: in p1*2, inh p2, reset p3, xfer p4->p5 ; out p6*1, p7*3
// '#' starts a comment. Errors are reported as ParseError with line and column.
Net parse_xpn(std::string_view text, const std::string& file = "<input>");
std::string render_xpn(const Net& net);

// "p1=3 p2=0" over the places of `net`; omitted places are 0.
Marking parse_marking(const Net& net, std::string_view text, const std::string& file = "<marking>");
std::string render_marking(const Net& net, const Marking& m);

// Reads a whole file; throws Error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace hipn
