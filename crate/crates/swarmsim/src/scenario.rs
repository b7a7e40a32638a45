// Scenario configuration; filled in with the sim driver.
