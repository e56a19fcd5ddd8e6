from .solver import IlpProblem, brute_force_solve, build_problem, integer_coefficients, objective, solve

__all__ = ["IlpProblem", "brute_force_solve", "build_problem", "integer_coefficients", "objective", "solve"]
