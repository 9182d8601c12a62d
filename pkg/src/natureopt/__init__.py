"""Nature-inspired population metaheuristics with hybrid combinators and a benchmark harness."""
