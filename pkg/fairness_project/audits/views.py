import logging

from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import status, viewsets
from rest_framework.decorators import api_view
from rest_framework.filters import OrderingFilter
from rest_framework.response import Response
from rest_framework.views import APIView

from . import services
from .domain import available_fixtures, load_domain, parse_domain
from .exceptions import FairnessAuditError
from .models import AuditRun
from .serializers import AuditRequestSerializer, AuditRunSerializer

logger = logging.getLogger(__name__)


def error_response(exc):
    body = {'error': exc.message}
    if exc.detail is not None:
        body['detail'] = exc.detail
    return Response(body, status=exc.http_status)


class AuditView(APIView):
    """
    POST an audit request; the response is the machine report.
    Every request that gets past validation is recorded as an AuditRun.
    """

    def post(self, request):
        serializer = AuditRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        args = dict(serializer.validated_data)
        document = args.pop('document', None)
        fixture = args.pop('fixture', None)
        try:
            domain = parse_domain(document) if document is not None else load_domain(fixture)
            report, exit_status = services.audit(domain, args)
        except FairnessAuditError as exc:
            logger.info("audit request rejected: %s", exc.message)
            return error_response(exc)
        run = services.record(report, 'audit', exit_status)
        return Response(report, status=status.HTTP_201_CREATED, headers={'X-Audit-Run': str(run.run_id)})


class AuditRunViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = AuditRun.objects.all()
    serializer_class = AuditRunSerializer
    filter_backends = [DjangoFilterBackend, OrderingFilter]
    filterset_fields = ['command', 'subject', 'exit_status', 'inputs_digest']
    ordering_fields = ['created_at', 'exit_status']


@api_view(['GET'])
def fixtures_view(request):
    """Names of the bundled domain documents."""
    return Response({'fixtures': available_fixtures()})
