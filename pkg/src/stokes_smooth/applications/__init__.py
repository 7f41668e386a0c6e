"""End-to-end reproductions: gamma function, nonlinear ODE, telegraph
equation, and late-coefficient smoothing."""
