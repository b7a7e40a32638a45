// Simulation driver modules.
