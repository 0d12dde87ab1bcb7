from django.urls import include, path
from rest_framework.routers import DefaultRouter

from . import views

router = DefaultRouter()
router.register(r'runs', views.AuditRunViewSet, basename='run')

urlpatterns = [
    path('', include(router.urls)),
    path('audit/', views.AuditView.as_view(), name='audit'),
    path('fixtures/', views.fixtures_view, name='fixtures'),
]
