"""Joint magnetometry-gradiometry workbench on dipolar spin chains.

Submodules
----------
qsim      dense statevector engine (rotations, phases, exact/Trotter evolution)
chain     chain geometry, sensing matrix, generators, dipolar Hamiltonian
decoders  pre-measurement decoder tiers T1-T4
fisher    classical/quantum Fisher information and the log-det objective
bounds    SQL and GHZ closed forms, simplex benchmark det(Q*)
cmaes     reference (mu/mu_w, lambda)-CMA-ES
varopt    variational encoder-decoder training grid
analysis  motif extraction, saturation/tier/seed tables
cli       experiment configuration, persistence, command-line entry point
kernels   numba-accelerated hot loops with a pure-numpy fallback
"""
__version__ = "0.1.0"
