"""Unit tests for the version module information

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import unittest
from mpolsr import version


class TestVersion(unittest.TestCase):
    """Test cases for version information"""

    def test_version_exists_and_is_string(self):
        self.assertIsInstance(version.__version__, str)
        self.assertRegex(version.__version__, r"^\d+\.\d+\.\d+")

    def test_title_and_description(self):
        self.assertEqual(version.__title__, "MP-OLSR Sim")
        self.assertEqual(
            version.__description__,
            "Multipath OLSR routing library and deterministic MANET simulator",
        )

    def test_author_and_license(self):
        """Test that authorship metadata is present."""
        self.assertEqual(version.__author__, "Alberto Barrago")
        self.assertEqual(version.__license__, "BSD 3-Clause License")

    def test_keywords_exists_and_is_list_of_strings(self):
        """Test that __keywords__ exists, is a list, and contains strings."""
        self.assertIsInstance(version.__keywords__, list)
        for keyword in version.__keywords__:
            self.assertIsInstance(keyword, str)
        self.assertIn("olsr", version.__keywords__)

    def test_requires_matches_runtime_stack(self):
        """Test that __requires__ lists the runtime dependencies."""
        self.assertEqual(
            version.__requires__, ["numpy", "aiofiles", "thefuzz", "setuptools"]
        )

    def test_python_requires_exists_and_is_string(self):
        """Test that __python_requires__ exists and is a string."""
        self.assertEqual(version.__python_requires__, ">=3.10")


if __name__ == "__main__":
    unittest.main()
