#pragma once

namespace judgeaudit {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0, 1].
/// Continued-fraction (modified Lentz) evaluation with the symmetry switch at
/// x > (a+1)/(a+b+2). Throws NumericError carrying (a, b, x) when the
/// fraction does not converge.
double regularized_incomplete_beta(double a, double b, double x);

double digamma(double x);
double trigamma(double x);

/// Two-tailed tail probability of Student's t with `dof` degrees of freedom:
/// 2 * P(T > |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2).
double student_t_two_tailed_p(double t, double dof);

}  // namespace judgeaudit
