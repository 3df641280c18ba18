"""Quantum circuit architecture search: statevector simulator, variational
classifier, gate placement environment and the DQN search agent."""

from _qarch import agent, cli, datasets, env, qsim, vqc

__all__ = ["agent", "cli", "datasets", "env", "qsim", "vqc"]
