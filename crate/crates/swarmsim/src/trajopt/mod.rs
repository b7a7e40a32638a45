// Trajectory optimization modules.
