"""
Version information for MP-OLSR Sim.

This module contains version information and metadata for the mpolsr package,
similar to what package.json provides in JavaScript projects.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

__version__ = "0.1.0"

__title__ = "MP-OLSR Sim"
__description__ = (
    "Multipath OLSR routing library and deterministic MANET simulator"
)
__author__ = "Alberto Barrago"
__author_email__ = "albertobarrago@gmail.com"
__license__ = "BSD 3-Clause License"
__copyright__ = "Copyright 2025 Alberto Barrago"

__repository__ = "https://github.com/AlbertoBarrago/mp-olsr-sim"
__keywords__ = ["manet", "olsr", "multipath", "mojette", "simulation"]
__status__ = "Development"

__requires__ = [
    "numpy",
    "aiofiles",
    "thefuzz",
    "setuptools",
]

__python_requires__ = ">=3.10"
