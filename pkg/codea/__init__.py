"""CoDEA - collaborative decomposition many-objective optimization and benchmark harness."""

__version__ = "1.0.0"
