"""
JSON input shapes accepted by the command-line tools.

Each serializer validates field types, builds the domain object and puts
it in ``validated_data['object']``; domain errors come back keyed by the
field that caused them.
"""
from rest_framework import serializers

from .beliefs import DiscreteBelief, SemanticPartition
from .exceptions import DomainError
from .gaussian_geometry import GaussianBelief, HalfSpace, OrthantPolytope


class DiscreteBeliefSerializer(serializers.Serializer):
    probs = serializers.ListField(child=serializers.FloatField(), min_length=1)

    def validate(self, attrs):
        try:
            attrs['object'] = DiscreteBelief(attrs['probs'])
        except DomainError as exc:
            raise serializers.ValidationError({'probs': str(exc)})
        return attrs


class SemanticPartitionSerializer(serializers.Serializer):
    regions = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(min_value=0)),
        min_length=1,
    )

    def __init__(self, *args, alphabet_size=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.alphabet_size = alphabet_size

    def validate(self, attrs):
        try:
            attrs['object'] = SemanticPartition.from_lists(attrs['regions'], self.alphabet_size)
        except DomainError as exc:
            raise serializers.ValidationError({'regions': str(exc)})
        return attrs


class GaussianBeliefSerializer(serializers.Serializer):
    mean = serializers.ListField(child=serializers.FloatField(), min_length=1)
    cov = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()), min_length=1)

    def validate(self, attrs):
        try:
            attrs['object'] = GaussianBelief(attrs['mean'], attrs['cov'])
        except ValueError as exc:
            # DomainError, or numpy rejecting ragged rows
            raise serializers.ValidationError({'cov': str(exc)})
        return attrs


class HalfSpaceSerializer(serializers.Serializer):
    w = serializers.ListField(child=serializers.FloatField(), min_length=1)
    T = serializers.FloatField()

    def validate(self, attrs):
        try:
            attrs['object'] = HalfSpace(attrs['w'], attrs['T'])
        except DomainError as exc:
            raise serializers.ValidationError({'w': str(exc)})
        return attrs


class OrthantPolytopeSerializer(serializers.Serializer):
    m = serializers.IntegerField(min_value=1)
    a = serializers.FloatField()

    def validate(self, attrs):
        if not attrs['a'] > 0:
            raise serializers.ValidationError({'a': 'threshold must be positive'})
        attrs['object'] = OrthantPolytope(attrs['m'], attrs['a'])
        return attrs
