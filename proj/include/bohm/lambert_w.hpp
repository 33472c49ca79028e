#pragma once

namespace bohm {

// Real Lambert W. branch 0 on [-1/e, inf), branch -1 on [-1/e, 0).
// Throws DomainError outside the branch's range or for other branches.
double lambert_w(int branch, double y);

}  // namespace bohm
