"""ratsteer - Multi-RAT traffic steering simulator with hierarchical RL agents"""

__version__ = "0.1.0"
