"""
Tests para el toolkit del principio 3XOR.
"""
