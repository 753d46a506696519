"""
Tests for the artifact cache (src/cache_manager.py).
"""

import pytest

from src.cache_manager import ArtifactCache
from src.encoder import InstanceParams


class TestArtifactCache:
    """Tests for the ArtifactCache class."""

    @pytest.fixture
    def cache(self, tmp_path):
        """
        Fixture that creates an ArtifactCache with isolated temporary storage.

        Args:
            tmp_path: pytest fixture providing temporary directory

        Returns:
            ArtifactCache instance using temporary directory
        """
        return ArtifactCache(cache_dir=str(tmp_path / "test_cache"), ttl_hours=24)

    def test_set_and_get_proof(self, cache, micro_params):
        """Test that a refutation can be stored and retrieved from cache."""
        # Arrange
        proof_text = "rquad 1 104\n1 input 1 : 1*x1 = 1\n"
        phases = {"step1": 10, "step2": 5, "count": 3}

        # Act
        cache.set_proof(micro_params, proof_text, phases)
        retrieved = cache.get_proof(micro_params)

        # Assert
        assert retrieved == {"proof": proof_text, "phases": phases}

        # Verify cache stats show one valid entry
        stats = cache.get_cache_stats()
        assert stats["proofs"]["valid"] == 1
        assert stats["proofs"]["total"] == 1

    def test_cache_miss_returns_none(self, cache, micro_params):
        """Test that get_proof returns None for parameters never stored."""
        # Act
        result = cache.get_proof(micro_params)

        # Assert
        assert result is None
        assert cache.get_cache_stats()["proofs"]["total"] == 0

    def test_proof_key_uses_every_parameter(self, cache, micro_params):
        """Test that instances differing only in d do not share an entry."""
        # Arrange
        cache.set_proof(micro_params, "rquad 1 1\n", {})

        # Act
        other = cache.get_proof(InstanceParams(2, 2, 2, 1, 2))

        # Assert
        assert other is None

    def test_expired_entries_not_returned(self, tmp_path, micro_params):
        """Test that expired cache entries are not returned and are cleaned up."""
        # Arrange - Create cache with TTL=0 (immediate expiration)
        cache = ArtifactCache(cache_dir=str(tmp_path / "expired_cache"), ttl_hours=0)

        # Act
        cache.set_proof(micro_params, "rquad 1 1\n", {})
        retrieved = cache.get_proof(micro_params)

        # Assert - Should return None because entry is expired
        assert retrieved is None
        assert cache.get_cache_stats()["proofs"]["total"] == 0

    def test_verdict_caching(self, cache):
        """Test that separator verdicts are keyed by formula fingerprint and triple."""
        # Act
        cache.set_verdict("abc123", 2, 1, 1, 0)
        cache.set_verdict("abc123", 2, 2, 1, 1)

        # Assert
        assert cache.get_verdict("abc123", 2, 1, 1) == 0
        assert cache.get_verdict("abc123", 2, 2, 1) == 1
        assert cache.get_verdict("def456", 2, 1, 1) is None

        # Verify it doesn't interfere with the proofs cache
        stats = cache.get_cache_stats()
        assert stats["verdicts"]["valid"] == 2
        assert stats["proofs"]["valid"] == 0

    def test_clear_expired_removes_only_expired(self, tmp_path):
        """Test that clear_expired removes only expired entries."""
        # Arrange - Same database, one valid and one expired entry
        valid_cache = ArtifactCache(cache_dir=str(tmp_path / "mixed"), ttl_hours=24)
        expired_cache = ArtifactCache(cache_dir=str(tmp_path / "mixed"), ttl_hours=0)
        valid_cache.set_verdict("f1", 2, 1, 1, 1)
        expired_cache.set_verdict("f2", 2, 1, 1, 0)

        # Act
        deleted = valid_cache.clear_expired()

        # Assert
        assert deleted == 1
        assert valid_cache.get_verdict("f1", 2, 1, 1) == 1
        assert valid_cache.get_cache_stats()["verdicts"]["total"] == 1

    def test_clear_all_removes_everything(self, cache, micro_params):
        """Test that clear_all removes all entries from all cache tables."""
        # Arrange
        cache.set_proof(micro_params, "rquad 1 1\n", {})
        cache.set_verdict("f1", 2, 1, 1, 1)

        # Act
        cache.clear_all()

        # Assert
        stats = cache.get_cache_stats()
        assert stats["proofs"]["total"] == 0
        assert stats["verdicts"]["total"] == 0

    def test_cache_stats_includes_config_and_size(self, cache):
        """Test that cache stats include TTL config and database size."""
        # Arrange
        cache.set_verdict("f1", 2, 1, 1, 1)

        # Act
        stats = cache.get_cache_stats()

        # Assert
        assert stats["ttl_hours"] == 24
        assert stats["cache_dir"].endswith("test_cache")
        assert stats["db_size_bytes"] > 0
