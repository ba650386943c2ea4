from .solver_config import SolverConfig, load_solver_config, SOLVER_CONFIG

__all__ = ["SolverConfig", "load_solver_config", "SOLVER_CONFIG"]
